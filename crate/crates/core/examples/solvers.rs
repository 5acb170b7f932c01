//! The three solvers on a random function over a grid, under both cost
//! models.

use lsq::oracle::TableObjective;
use lsq::rng::seeded;
use lsq::solvers::{solve, Algorithm, SolverConfig};
use lsq::{CostModel, GraphFamily};
use rand::seq::SliceRandom;

fn main() -> lsq::Result<()> {
    let g = GraphFamily::grid(64, 2).build()?;
    let mut vals: Vec<i64> = (0..g.order() as i64).collect();
    vals.shuffle(&mut seeded(3));
    let f = TableObjective(vals);

    for alg in [Algorithm::Steepest, Algorithm::Sample, Algorithm::Recursive] {
        for model in [CostModel::Unit, CostModel::quantum()] {
            let mut cfg = SolverConfig::new(alg, model, 9);
            cfg.audit = true;
            let rep = solve(&g, &f, &cfg)?;
            println!(
                "{:<9} {:<8} out {:?} local min {} cost {} descent {} rounds {}",
                alg.id(),
                if model.is_quantum() {
                    "quantum"
                } else {
                    "unit"
                },
                rep.output,
                rep.is_local_min,
                rep.ledger.charged_cost,
                rep.descent_len,
                rep.trace.len()
            );
        }
    }

    let rep = solve(
        &g,
        &f,
        &SolverConfig::new(Algorithm::Recursive, CostModel::Unit, 9),
    )?;
    for r in &rep.trace {
        println!(
            "  m {} -> {}, |U| = {}, draws {}, claim {:?}",
            r.m, r.m_next, r.region, r.draws, r.claim
        );
    }
    Ok(())
}
