//! Query counting under the unit and simulated-quantum cost models.

use lsq::oracle::TableObjective;
use lsq::{CostModel, CountingOracle, VertexId};

fn main() -> lsq::Result<()> {
    let f = TableObjective((0..100).map(|i| (i * 37 % 101) as i64).collect());
    let all: Vec<VertexId> = (0..100).collect();

    let mut unit = CountingOracle::new(&f, CostModel::Unit, 1);
    unit.set_phase("scan");
    let (v, fv) = unit.min_find(&all, 0.01)?;
    println!("unit: argmin {v} (f = {fv}), ledger {:?}", unit.ledger());

    let mut q = CountingOracle::new(&f, CostModel::quantum(), 1);
    q.set_phase("grover");
    let (v, fv) = q.min_find(&all, 0.01)?;
    println!(
        "quantum: argmin {v} (f = {fv}), charged {}",
        q.ledger().charged_cost
    );
    println!(
        "cost at K = 100, eps = 0.01: {}",
        CostModel::quantum().min_find_cost(100, 0.01)
    );
    Ok(())
}
