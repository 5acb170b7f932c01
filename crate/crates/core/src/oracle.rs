//! Query-counting oracles and cost models.
//!
//! A [`CountingOracle`] wraps either a value function ([`Objective`]) or a
//! set-membership function ([`Membership`]) and charges every access to a
//! [`QueryLedger`]. Under [`CostModel::Quantum`], batch minimum finding is
//! not simulated at amplitude level: it is charged the Dürr–Høyer query count
//! and made wrong with probability `eps` by explicit error injection.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::graph::VertexId;
use crate::rng::{seeded, Rng};

/// A black-box function `f : V -> Z` addressed by vertex id.
pub trait Objective: Sync {
    fn value(&self, v: VertexId) -> i64;
}

impl<F: Fn(VertexId) -> i64 + Sync> Objective for F {
    fn value(&self, v: VertexId) -> i64 {
        self(v)
    }
}

/// A black-box set `S ⊆ V` answering membership questions.
pub trait Membership: Sync {
    fn contains(&self, v: VertexId) -> bool;
}

/// Function given by an explicit table indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableObjective(pub Vec<i64>);

impl Objective for TableObjective {
    fn value(&self, v: VertexId) -> i64 {
        self.0[v as usize]
    }
}

/// Running totals of oracle usage.
///
/// `charged_cost` is always the sum of `phases`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub value_queries: u64,
    pub membership_queries: u64,
    pub charged_cost: u64,
    pub phases: BTreeMap<String, u64>,
}

impl QueryLedger {
    fn charge(&mut self, phase: &str, cost: u64) {
        self.charged_cost += cost;
        *self.phases.entry(phase.to_owned()).or_default() += cost;
    }

    pub fn phase_cost(&self, phase: &str) -> u64 {
        self.phases.get(phase).copied().unwrap_or(0)
    }
}

/// How queries are charged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CostModel {
    /// Every examined element costs one query.
    #[default]
    Unit,
    /// Minimum finding over `K` elements at error `eps` costs
    /// `ceil(c_dh * sqrt(K) * max(1, ln(1/eps)))`.
    Quantum { c_dh: f64 },
}

impl CostModel {
    pub fn quantum() -> Self {
        CostModel::Quantum { c_dh: 1.0 }
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, CostModel::Quantum { .. })
    }

    /// Charge for one minimum-finding call over `k` elements.
    pub fn min_find_cost(&self, k: usize, eps: f64) -> u64 {
        match *self {
            CostModel::Unit => k as u64,
            CostModel::Quantum { c_dh } => {
                let log_term = (1.0 / eps).ln().max(1.0);
                (c_dh * (k as f64).sqrt() * log_term).ceil() as u64
            }
        }
    }
}

/// Oracle wrapper that counts every evaluation before returning it.
pub struct CountingOracle<'a, F: ?Sized> {
    inner: &'a F,
    model: CostModel,
    ledger: QueryLedger,
    phase: String,
    rng: Rng,
}

impl<'a, F: ?Sized> CountingOracle<'a, F> {
    /// `seed` drives the error-injection stream of the quantum model.
    pub fn new(inner: &'a F, model: CostModel, seed: u64) -> Self {
        CountingOracle {
            inner,
            model,
            ledger: QueryLedger::default(),
            phase: "default".to_owned(),
            rng: seeded(seed),
        }
    }

    pub fn model(&self) -> CostModel {
        self.model
    }

    /// Label under which subsequent charges are recorded.
    pub fn set_phase(&mut self, phase: &str) {
        if self.phase != phase {
            self.phase = phase.to_owned();
        }
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }

    pub fn inner(&self) -> &'a F {
        self.inner
    }
}

impl<F: Objective + ?Sized> CountingOracle<'_, F> {
    /// `f(v)`, charged one query.
    pub fn query_value(&mut self, v: VertexId) -> i64 {
        self.ledger.value_queries += 1;
        self.ledger.charge(&self.phase, 1);
        self.inner.value(v)
    }

    /// `f(v)` without charging; for post-hoc verification only.
    pub fn peek(&self, v: VertexId) -> i64 {
        self.inner.value(v)
    }

    /// Finds an element of `set` with minimal value and returns it with its
    /// value. Ties go to the first occurrence in `set`.
    ///
    /// Under the unit model every element is queried. Under the quantum model
    /// the Dürr–Høyer cost is charged and, with probability `eps`, a uniformly
    /// random element is returned instead of a minimizer.
    pub fn min_find(&mut self, set: &[VertexId], eps: f64) -> Result<(VertexId, i64)> {
        if set.is_empty() {
            return input("min_find over an empty set");
        }
        match self.model {
            CostModel::Unit => {
                let mut best = (set[0], self.query_value(set[0]));
                for &v in &set[1..] {
                    let fv = self.query_value(v);
                    if fv < best.1 {
                        best = (v, fv);
                    }
                }
                Ok(best)
            }
            CostModel::Quantum { .. } => {
                if !(eps > 0.0 && eps < 1.0) {
                    return input(format!("quantum min_find needs 0 < eps < 1, got {eps}"));
                }
                let cost = self.model.min_find_cost(set.len(), eps);
                self.ledger.value_queries += cost;
                self.ledger.charge(&self.phase, cost);
                if self.rng.random::<f64>() < eps {
                    let v = set[self.rng.random_range(0..set.len())];
                    return Ok((v, self.inner.value(v)));
                }
                Ok(first_min(set, |v| self.inner.value(v)))
            }
        }
    }
}

impl<M: Membership + ?Sized> CountingOracle<'_, M> {
    /// Whether `v` is in the hidden set, charged one query.
    pub fn query_membership(&mut self, v: VertexId) -> bool {
        self.ledger.membership_queries += 1;
        self.ledger.charge(&self.phase, 1);
        self.inner.contains(v)
    }
}

/// First minimizer of `f` over `set` (which must be nonempty).
pub(crate) fn first_min(set: &[VertexId], f: impl Fn(VertexId) -> i64) -> (VertexId, i64) {
    let mut best = (set[0], f(set[0]));
    for &v in &set[1..] {
        let fv = f(v);
        if fv < best.1 {
            best = (v, fv);
        }
    }
    best
}
