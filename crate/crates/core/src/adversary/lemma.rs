//! Exact hitting probabilities `p(u,t1,v,t2)` and the conditioned variant
//! `q(u,u',t1,v,t2)` (walk at `u` after step `t1` and not moving to `u'` at
//! step `t1 + 1`).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::WalkSpec;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Largest state space the exact evolution accepts.
pub const MAX_LEMMA_STATES: u64 = 1 << 16;

/// Path counts reaching each state, all over one common denominator.
#[derive(Clone, Debug)]
struct Counts {
    num: Vec<u128>,
    den: u128,
}

fn evolve(
    g: &Graph,
    spec: &WalkSpec,
    from: &Counts,
    t: usize,
    scratch: &mut Vec<VertexId>,
) -> Result<Counts> {
    let mut next = vec![0u128; from.num.len()];
    let mut c_t = None;
    for (u, &cnt) in from.num.iter().enumerate() {
        spec.candidates_into(g, u as VertexId, t, scratch);
        c_t.get_or_insert(scratch.len() as u128);
        if cnt == 0 {
            continue;
        }
        for &w in scratch.iter() {
            next[w as usize] += cnt;
        }
    }
    // Each count now sits over one more factor c_t of the denominator.
    Ok(Counts {
        num: next,
        den: from
            .den
            .checked_mul(c_t.unwrap_or(1))
            .ok_or_else(overflow)?,
    })
}

fn overflow() -> Error {
    Error::Budget {
        what: "exact walk path counts",
        needed: u128::MAX,
        limit: u128::MAX,
    }
}

fn point(states: usize, at: VertexId) -> Counts {
    let mut num = vec![0u128; states];
    num[at as usize] = 1;
    Counts { num, den: 1 }
}

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `p` and `q` for one tuple. `q` is `None` when `|W(u, t1+1)| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HitProbabilities {
    pub p: BigRational,
    pub q: Option<BigRational>,
}

fn check_size(g: &Graph) -> Result<()> {
    if g.order() > MAX_LEMMA_STATES {
        return Err(Error::Budget {
            what: "exact walk distribution",
            needed: g.order() as u128,
            limit: MAX_LEMMA_STATES as u128,
        });
    }
    Ok(())
}

/// Exact `p(u,t1,v,t2)` and `q(u,u',t1,v,t2)` by distribution evolution.
///
/// If `u'` is not a possible move at step `t1 + 1` the extra condition is
/// vacuous and `q = p`.
pub fn conditional_hit_probability(
    g: &Graph,
    spec: &WalkSpec,
    u: VertexId,
    u_prime: VertexId,
    t1: usize,
    v: VertexId,
    t2: usize,
) -> Result<HitProbabilities> {
    check_size(g)?;
    spec.validate(g)?;
    if t2 < t1 {
        return Err(Error::Input(format!("t2 = {t2} precedes t1 = {t1}")));
    }
    let n = g.order() as usize;
    let mut scratch = Vec::new();
    let mut p = point(n, u);
    for t in t1 + 1..=t2 {
        p = evolve(g, spec, &p, t, &mut scratch)?;
    }
    let p_val = ratio(p.num[v as usize], p.den);
    if t2 == t1 {
        return Ok(HitProbabilities { p: p_val, q: None });
    }
    let first = spec.candidates(g, u, t1 + 1);
    if first.len() == 1 {
        return Ok(HitProbabilities { p: p_val, q: None });
    }
    if !first.contains(&u_prime) {
        return Ok(HitProbabilities {
            q: Some(p_val.clone()),
            p: p_val,
        });
    }
    let mut q = Counts {
        num: vec![0; n],
        den: first.len() as u128 - 1,
    };
    for &w in first.iter().filter(|&&w| w != u_prime) {
        q.num[w as usize] += 1;
    }
    for t in t1 + 2..=t2 {
        q = evolve(g, spec, &q, t, &mut scratch)?;
    }
    Ok(HitProbabilities {
        p: p_val,
        q: Some(ratio(q.num[v as usize], q.den)),
    })
}

/// Summary of an exhaustive check of `q <= 2p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub graph: String,
    pub horizon: usize,
    pub tuples_checked: u64,
    pub violations: u64,
    /// Largest `q / p` seen over tuples with `p > 0`.
    pub max_ratio: f64,
}

/// Checks `q(u,u',t1,v,t2) <= 2 p(u,t1,v,t2)` for every `u`, every allowed
/// `u'` with `|W(u,t1+1)| > 1`, every `v` and `0 <= t1 < t2 <= horizon`.
///
/// The comparison is done on integer path counts, so it is exact.
pub fn check_two_prob_lemma(g: &Graph, spec: &WalkSpec, horizon: usize) -> Result<LemmaReport> {
    check_size(g)?;
    spec.validate(g)?;
    let n = g.order() as usize;
    let mut scratch = Vec::new();
    let mut tuples = 0u64;
    let mut violations = 0u64;
    let mut max_ratio = 0.0f64;
    for u in 0..n as VertexId {
        for t1 in 0..horizon {
            let first = spec.candidates(g, u, t1 + 1);
            let c1 = first.len() as u128;
            if c1 < 2 {
                continue;
            }
            // p(u,t1,·,t2) for every t2, over denominators prod c.
            let mut p_rows = Vec::with_capacity(horizon - t1);
            let mut p = point(n, u);
            for t in t1 + 1..=horizon {
                p = evolve(g, spec, &p, t, &mut scratch)?;
                p_rows.push(p.clone());
            }
            for &up in &first {
                let mut q = Counts {
                    num: vec![0; n],
                    den: c1 - 1,
                };
                for &w in first.iter().filter(|&&w| w != up) {
                    q.num[w as usize] += 1;
                }
                for (k, t2) in (t1 + 1..=horizon).enumerate() {
                    if t2 > t1 + 1 {
                        q = evolve(g, spec, &q, t2, &mut scratch)?;
                    }
                    let pr = &p_rows[k];
                    // p.den = c1 * D, q.den = (c1 - 1) * D with the same D.
                    for v in 0..n {
                        tuples += 1;
                        let lhs = q.num[v] * c1;
                        let rhs = 2 * pr.num[v] * (c1 - 1);
                        if lhs > rhs {
                            violations += 1;
                        }
                        if pr.num[v] > 0 {
                            let r = (q.num[v] as f64 / q.den as f64)
                                / (pr.num[v] as f64 / pr.den as f64);
                            max_ratio = max_ratio.max(r);
                        }
                    }
                }
            }
        }
    }
    Ok(LemmaReport {
        graph: g.to_string(),
        horizon,
        tuples_checked: tuples,
        violations,
        max_ratio,
    })
}
