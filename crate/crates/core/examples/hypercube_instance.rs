//! Clocked-walk instance on the Boolean hypercube and the two-query
//! membership reduction.

use lsq::adversary::{hypercube_decomposition, BoundMode, PathInstance, WalkRule, WalkSpec};
use lsq::walks::{bound_estimate, pt_profile, WalkKind};
use lsq::{CostModel, CountingOracle, Vertex};

fn main() -> lsq::Result<()> {
    let n = 10;
    let dec = hypercube_decomposition(n, BoundMode::Randomized)?;
    println!("B^{n} = B^{} x B^{}, T = {}", dec.m, n - dec.m, dec.t_len);

    let spec = WalkSpec::new(WalkRule::Neighbor, Vertex::new(vec![1; dec.m as usize]));
    let inst = PathInstance::generate(dec.gw.clone(), dec.gc.clone(), spec, dec.t_len, 42)?;
    let end = inst.product().vertex(inst.end());
    println!("path of {} vertices, end {end:?}", inst.path().len());
    println!(
        "unique local min: {}",
        inst.verify_unique_local_min()?.unique
    );

    let mut o = CountingOracle::new(&inst, CostModel::Unit, 0);
    let mut worst = 0;
    for v in inst.product().vertex_ids() {
        let before = o.ledger().membership_queries;
        assert_eq!(
            PathInstance::reduce_query(inst.frame(), v, &mut o),
            inst.eval_fx(v)
        );
        worst = worst.max(o.ledger().membership_queries - before);
    }
    println!("reduction: at most {worst} membership queries per value");

    let est = bound_estimate(&pt_profile(
        WalkKind::Hypercube { m: dec.m as usize },
        dec.t_len,
    )?);
    println!(
        "T / sum p_t = {:.3}, T / sum sqrt(p_t) = {:.3}",
        est.randomized, est.quantum
    );
    Ok(())
}
