//! Local Search algorithms run against a [`CountingOracle`].
//!
//! Every solver ends with an exact steepest descent, so under the unit cost
//! model the output is always a local minimum; the interesting quantity is
//! what it costs to get there.

use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::graph::{Graph, Vertex, VertexId};
use crate::oracle::{CostModel, CountingOracle, Objective, QueryLedger};
use crate::rng::{seeded, Rng};

mod recursive;

pub use recursive::{local_search_recursive, RoundTrace};

/// Error bound for each quantum descent step.
pub const DESCENT_EPS: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Steepest descent from a given (or uniformly random) start.
    Steepest,
    /// Best of `s` uniform samples, then steepest descent.
    Sample,
    /// The recursive shrinking-region algorithm.
    Recursive,
}

impl Algorithm {
    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::Steepest => "steepest",
            Algorithm::Sample => "sample",
            Algorithm::Recursive => "recursive",
        }
    }
}

/// Parses an algorithm id. `recursive-r` and `recursive-q` also fix the cost
/// model (unit and quantum respectively).
pub fn parse_algorithm(s: &str) -> Result<(Algorithm, Option<CostModel>)> {
    Ok(match s {
        "steepest" => (Algorithm::Steepest, None),
        "sample" => (Algorithm::Sample, None),
        "recursive" => (Algorithm::Recursive, None),
        "recursive-r" => (Algorithm::Recursive, Some(CostModel::Unit)),
        "recursive-q" => (Algorithm::Recursive, Some(CostModel::quantum())),
        _ => return input(format!("unknown algorithm {s:?}")),
    })
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_algorithm(s).map(|(a, _)| a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub model: CostModel,
    pub seed: u64,
    /// Start vertex for steepest descent; uniform random when absent.
    #[serde(default)]
    pub start: Option<Vertex>,
    /// Sample count for sample-then-descend.
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub eps1: Option<f64>,
    #[serde(default)]
    pub eps2: Option<f64>,
    #[serde(default)]
    pub eps3: Option<f64>,
    /// Boundary draws per round before falling back to `floor(m_i / 2)`.
    pub j_max: usize,
    /// Re-query `f(u_i)` and `f(v_i)` in the comparison step even when
    /// already known this round.
    #[serde(default)]
    pub requery: bool,
    /// Record the uncharged per-round check `n(u_{i+1}, U_i) <= m_i / 8`.
    #[serde(default)]
    pub audit: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, model: CostModel, seed: u64) -> Self {
        SolverConfig {
            algorithm,
            model,
            seed,
            start: None,
            samples: None,
            eps1: None,
            eps2: None,
            eps3: None,
            j_max: 64,
            requery: false,
            audit: false,
        }
    }

    /// `(eps1, eps2, eps3)`, defaulting to `1/(10 log2 d)` twice and
    /// `1/(200 log2 d)`, capped at 1/2.
    pub fn epsilons(&self, diameter: u64) -> (f64, f64, f64) {
        let lg = (diameter.max(2) as f64).log2();
        let cap = |e: f64| e.min(0.5);
        (
            self.eps1.unwrap_or(cap(1.0 / (10.0 * lg))),
            self.eps2.unwrap_or(cap(1.0 / (10.0 * lg))),
            self.eps3.unwrap_or(cap(1.0 / (200.0 * lg))),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub output: Vertex,
    pub output_id: VertexId,
    /// Checked after the run without charging the ledger.
    pub is_local_min: bool,
    pub ledger: QueryLedger,
    /// Moves made by the final descent.
    pub descent_len: u64,
    pub trace: Vec<RoundTrace>,
    pub seed: u64,
    pub config: SolverConfig,
}

/// Runs the configured solver on `f` over `g`.
pub fn solve<F: Objective + ?Sized>(g: &Graph, f: &F, cfg: &SolverConfig) -> Result<SolveReport> {
    let mut rng = seeded(cfg.seed);
    let mut oracle = CountingOracle::new(f, cfg.model, crate::rng::stream_seed(cfg.seed, 1));
    let mut trace = Vec::new();
    let (out, descent_len) = match cfg.algorithm {
        Algorithm::Steepest => {
            let v0 = match &cfg.start {
                Some(v) => g.id(v)?,
                None => rng.random_range(0..g.order()),
            };
            steepest_descent(g, &mut oracle, v0, None)?
        }
        Algorithm::Sample => {
            let s = cfg.samples.unwrap_or_else(|| default_samples(g, cfg.model));
            sample_then_descend(g, &mut oracle, s, &mut rng)?
        }
        Algorithm::Recursive => {
            let (out, len, tr) = local_search_recursive(g, &mut oracle, cfg, &mut rng)?;
            trace = tr;
            (out, len)
        }
    };
    Ok(SolveReport {
        algorithm: cfg.algorithm,
        output: g.vertex(out),
        output_id: out,
        is_local_min: g.is_local_min(out, |v| f.value(v)),
        ledger: oracle.into_ledger(),
        descent_len,
        trace,
        seed: cfg.seed,
        config: cfg.clone(),
    })
}

/// `ceil(sqrt(N δ))` for the unit model, `ceil(N^(2/3) δ^(1/3))` for the
/// quantum model.
pub fn default_samples(g: &Graph, model: CostModel) -> u64 {
    let n = g.order() as f64;
    let delta = g.max_degree().max(1) as f64;
    let s = if model.is_quantum() {
        n.powf(2.0 / 3.0) * delta.powf(1.0 / 3.0)
    } else {
        (n * delta).sqrt()
    };
    (s.ceil() as u64).max(1)
}

/// Follows a decreasing path from `v0` and returns the terminal vertex and
/// the number of moves. `f(v0)` is queried unless supplied.
///
/// Unit model: every step queries all neighbors. Quantum model: every step
/// is a minimum finding at error [`DESCENT_EPS`]; a non-improving answer is
/// double-checked by one charged round of unit queries before stopping.
pub fn steepest_descent<F: Objective + ?Sized>(
    g: &Graph,
    oracle: &mut CountingOracle<'_, F>,
    v0: VertexId,
    known: Option<i64>,
) -> Result<(VertexId, u64)> {
    oracle.set_phase("descent");
    let mut v = v0;
    let mut fv = match known {
        Some(x) => x,
        None => oracle.query_value(v0),
    };
    let mut moves = 0u64;
    let mut nbrs = Vec::new();
    loop {
        g.neighbor_ids_into(v, &mut nbrs);
        if nbrs.is_empty() {
            return Ok((v, moves));
        }
        let (mut w, mut fw) = oracle.min_find(&nbrs, DESCENT_EPS)?;
        if fw >= fv && oracle.model().is_quantum() {
            oracle.set_phase("verify");
            let mut best = (nbrs[0], oracle.query_value(nbrs[0]));
            for &u in &nbrs[1..] {
                let fu = oracle.query_value(u);
                if fu < best.1 {
                    best = (u, fu);
                }
            }
            (w, fw) = best;
            oracle.set_phase("descent");
        }
        if fw < fv {
            v = w;
            fv = fw;
            moves += 1;
        } else {
            return Ok((v, moves));
        }
    }
}

/// Samples `s` vertices uniformly with replacement (all of `V` once
/// `s >= N`), takes the minimum, and descends from it.
pub fn sample_then_descend<F: Objective + ?Sized>(
    g: &Graph,
    oracle: &mut CountingOracle<'_, F>,
    s: u64,
    rng: &mut Rng,
) -> Result<(VertexId, u64)> {
    if s == 0 {
        return input("sample count must be at least 1");
    }
    oracle.set_phase("sample");
    let set: Vec<VertexId> = if s >= g.order() {
        g.vertex_ids().collect()
    } else {
        (0..s).map(|_| rng.random_range(0..g.order())).collect()
    };
    let (v, fv) = oracle.min_find(&set, DESCENT_EPS)?;
    steepest_descent(g, oracle, v, Some(fv))
}
