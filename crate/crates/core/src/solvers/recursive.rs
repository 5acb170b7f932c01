//! The recursive algorithm: repeatedly sample the current region `U_i`,
//! keep the best point `u_{i+1}`, and shrink `U_i` to a ball around it whose
//! boundary sphere is no better than `u_{i+1}`. Once the radius is at most
//! 10, descend.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{steepest_descent, SolverConfig};
use crate::error::Result;
use crate::graph::{distance_within, Graph, VertexId};
use crate::oracle::{CountingOracle, Objective};
use crate::rng::Rng;

/// One round of the outer loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    /// `m_i`.
    pub m: u64,
    /// `|U_i|`.
    pub region: usize,
    /// Distinct sampled vertices.
    pub samples: usize,
    /// `J_i`, boundary draws made.
    pub draws: usize,
    /// `m_{i+1}`.
    pub m_next: u64,
    /// `|W_i|`.
    pub sphere: usize,
    /// Why the boundary search fell back to `floor(m_i / 2)`, if it did.
    pub fallback: Option<String>,
    /// `n(u_{i+1}, U_i) <= m_i / 8`, when auditing.
    pub claim: Option<bool>,
}

/// Runs the loop and the final descent. Returns the output vertex, the
/// descent length and the per-round trace.
pub fn local_search_recursive<F: Objective + ?Sized>(
    g: &Graph,
    oracle: &mut CountingOracle<'_, F>,
    cfg: &SolverConfig,
    rng: &mut Rng,
) -> Result<(VertexId, u64, Vec<RoundTrace>)> {
    let d = g.diameter();
    let (eps1, eps2, eps3) = cfg.epsilons(d);
    let mut m = d;
    let mut region: Vec<VertexId> = g.vertex_ids().collect();
    let mut u: Option<VertexId> = None;
    let mut trace = Vec::new();

    while m > 10 {
        // Values learned this round; the comparison step reuses them.
        let mut known: HashMap<VertexId, i64> = HashMap::new();

        oracle.set_phase("sample");
        let want = (8.0 * region.len() as f64 / m as f64 * (1.0 / eps1).ln()).ceil() as usize;
        let mut sample: Vec<VertexId> = (0..want.max(1))
            .map(|_| *region.choose(rng).expect("region is nonempty"))
            .collect();
        sample.sort_unstable();
        sample.dedup();
        let (v, fv) = oracle.min_find(&sample, eps2)?;
        if !oracle.model().is_quantum() {
            known.insert(v, fv);
        }

        oracle.set_phase("compare");
        let next = match u {
            None => v,
            Some(prev) => {
                let mut val = |x: VertexId, oracle: &mut CountingOracle<'_, F>| match known.get(&x)
                {
                    Some(&fx) if !cfg.requery => fx,
                    _ => {
                        let fx = oracle.query_value(x);
                        known.insert(x, fx);
                        fx
                    }
                };
                let fu = val(prev, oracle);
                let fv = val(v, oracle);
                if fu <= fv {
                    prev
                } else {
                    v
                }
            }
        };

        let claim = cfg.audit.then(|| {
            let fu = oracle.peek(next);
            let below = region.iter().filter(|&&w| oracle.peek(w) < fu).count();
            below as u64 * 8 <= m
        });

        // Distances from u_{i+1} inside U_i, in the metric of G.
        let dist: Vec<u64> = region
            .iter()
            .map(|&w| distance_within(g, next, w))
            .collect();
        let lo = m.div_ceil(8);
        let hi = m / 2;
        let mut shell = vec![0usize; (hi + 1) as usize];
        for &r in &dist {
            if r <= hi {
                shell[r as usize] += 1;
            }
        }
        let cap = 10.0 * region.len() as f64 / m as f64;
        let allowed: Vec<u64> = (lo..=hi)
            .filter(|&r| shell[r as usize] as f64 <= cap)
            .collect();

        oracle.set_phase("boundary");
        let mut draws = 0usize;
        let mut fallback = None;
        let mut fu = known.get(&next).copied();
        let chosen = loop {
            if allowed.is_empty() {
                fallback = Some("M_i is empty".to_owned());
                break hi;
            }
            if draws >= cfg.j_max {
                fallback = Some(format!("no good sphere in {} draws", cfg.j_max));
                break hi;
            }
            draws += 1;
            let r = allowed[rng.random_range(0..allowed.len())];
            let sphere: Vec<VertexId> = region
                .iter()
                .zip(&dist)
                .filter(|&(_, &dw)| dw == r)
                .map(|(&w, _)| w)
                .collect();
            if sphere.is_empty() {
                break r;
            }
            let (_, fmin) = oracle.min_find(&sphere, eps3)?;
            let fu_val = match fu {
                Some(x) => x,
                None => {
                    let x = oracle.query_value(next);
                    fu = Some(x);
                    x
                }
            };
            if fu_val <= fmin {
                break r;
            }
        };

        let sphere_len = dist.iter().filter(|&&dw| dw == chosen).count();
        region = region
            .iter()
            .zip(&dist)
            .filter(|&(_, &dw)| dw <= chosen)
            .map(|(&w, _)| w)
            .collect();
        trace.push(RoundTrace {
            m,
            region: dist.len(),
            samples: sample.len(),
            draws,
            m_next: chosen,
            sphere: sphere_len,
            fallback,
            claim,
        });
        m = chosen;
        u = Some(next);
    }

    // Graphs of diameter at most 10 skip the loop; start anywhere.
    let start = match u {
        Some(x) => x,
        None => rng.random_range(0..g.order()),
    };
    let (out, len) = steepest_descent(g, oracle, start, None)?;
    Ok((out, len, trace))
}

#[cfg(test)]
mod tests {
    use super::super::{solve, Algorithm, SolverConfig};
    use crate::graph::{GraphFamily, VertexId};
    use crate::oracle::{CostModel, TableObjective};
    use crate::rng::seeded;
    use rand::seq::SliceRandom;

    fn shuffled(n: usize, seed: u64) -> TableObjective {
        let mut v: Vec<i64> = (0..n as i64).collect();
        v.shuffle(&mut seeded(seed));
        TableObjective(v)
    }

    #[test]
    fn shrinks_monotonically() {
        let g = GraphFamily::grid(40, 2).build().unwrap();
        for seed in 0..10 {
            let f = shuffled(1600, seed);
            let cfg = SolverConfig::new(Algorithm::Recursive, CostModel::Unit, seed);
            let rep = solve(&g, &f, &cfg).unwrap();
            assert!(rep.is_local_min);
            assert!(rep.trace.len() as f64 <= (g.diameter() as f64).log2());
            for w in rep.trace.windows(2) {
                assert!(w[1].m <= w[0].m / 2);
                assert!(w[1].region <= w[0].region);
            }
            for r in &rep.trace {
                assert!(r.m_next <= r.m / 2);
            }
        }
    }

    #[test]
    fn constant_function() {
        let g = GraphFamily::line(500).build().unwrap();
        let f = |_: VertexId| 1i64;
        let cfg = SolverConfig::new(Algorithm::Recursive, CostModel::Unit, 4);
        let rep = solve(&g, &f, &cfg).unwrap();
        assert!(rep.is_local_min);
        assert_eq!(rep.descent_len, 0);
        assert!(rep
            .trace
            .iter()
            .all(|r| r.draws == 1 && r.fallback.is_none()));
    }

    #[test]
    fn small_diameter_skips_loop() {
        let g = GraphFamily::grid(4, 2).build().unwrap();
        let f = shuffled(16, 1);
        let cfg = SolverConfig::new(Algorithm::Recursive, CostModel::Unit, 2);
        let rep = solve(&g, &f, &cfg).unwrap();
        assert!(rep.trace.is_empty());
        assert!(rep.is_local_min);
    }

    #[test]
    fn quantum_model_outputs_local_min() {
        let g = GraphFamily::grid(32, 2).build().unwrap();
        for seed in 0..10 {
            let f = shuffled(1024, seed + 100);
            let cfg = SolverConfig::new(Algorithm::Recursive, CostModel::quantum(), seed);
            let rep = solve(&g, &f, &cfg).unwrap();
            assert!(rep.is_local_min);
            let l = &rep.ledger;
            assert_eq!(l.phases.values().sum::<u64>(), l.charged_cost);
        }
    }

    #[test]
    fn requery_costs_more() {
        let g = GraphFamily::line(4096).build().unwrap();
        let f = shuffled(4096, 9);
        let mut a = SolverConfig::new(Algorithm::Recursive, CostModel::Unit, 5);
        let ra = solve(&g, &f, &a).unwrap();
        a.requery = true;
        let rb = solve(&g, &f, &a).unwrap();
        assert!(rb.ledger.charged_cost >= ra.ledger.charged_cost);
    }
}
