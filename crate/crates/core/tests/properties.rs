use lsq::adversary::{
    block_threaded_walk, grid_walk_integer, BlockConfig, PathInstance, WalkRule, WalkSpec,
};
use lsq::oracle::TableObjective;
use lsq::solvers::{solve, Algorithm, SolverConfig};
use lsq::walks::{line_walk_dp, parity_closed_form, parity_dp};
use lsq::{CostModel, CountingOracle, Graph, GraphFamily, Vertex, VertexId};
use num_traits::One;
use proptest::prelude::*;

fn small_family() -> impl Strategy<Value = GraphFamily> {
    prop_oneof![
        (1u32..40).prop_map(GraphFamily::line),
        (1u32..8).prop_map(GraphFamily::boolean),
        (2u32..5, 1u32..4).prop_map(|(k, l)| GraphFamily::hypercube(k, l)),
        (1u32..7, 1u32..4).prop_map(|(n, d)| GraphFamily::grid(n, d)),
        (1u32..5, 1u32..5, 1u32..3).prop_map(|(a, b, d)| GraphFamily::product(
            GraphFamily::line(a),
            GraphFamily::grid(b, d)
        )),
    ]
}

fn graph_and_id() -> impl Strategy<Value = (Graph, VertexId)> {
    small_family().prop_flat_map(|f| {
        let g = f.build().unwrap();
        let n = g.order();
        (Just(g), 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn id_vertex_round_trip((g, v) in graph_and_id()) {
        prop_assert_eq!(g.id(&g.vertex(v)).unwrap(), v);
    }

    #[test]
    fn hamilton_rank_round_trip((g, v) in graph_and_id()) {
        let x = g.vertex(v);
        let r = g.hamilton_rank(&x).unwrap();
        prop_assert_eq!(g.hamilton_unrank(r).unwrap(), x.clone());
        if let Some(next) = g.hamilton_successor(&x).unwrap() {
            prop_assert_eq!(g.hamilton_rank(&next).unwrap(), r + 1);
            prop_assert!(g.adjacent(v, g.id(&next).unwrap()));
        } else {
            prop_assert_eq!(r, g.order() - 1);
        }
    }

    #[test]
    fn neighbors_are_symmetric_at_distance_one((g, v) in graph_and_id()) {
        for w in g.neighbor_ids(v) {
            prop_assert!(g.neighbor_ids(w).contains(&v));
            prop_assert_eq!(g.distance_ids(v, w), 1);
        }
        prop_assert!(g.neighbor_ids(v).len() <= g.max_degree());
    }

    #[test]
    fn triangle_inequality((g, a) in graph_and_id(), b in any::<u64>(), c in any::<u64>()) {
        let (b, c) = (b % g.order(), c % g.order());
        prop_assert_eq!(g.distance_ids(a, b), g.distance_ids(b, a));
        prop_assert!(g.distance_ids(a, c) <= g.distance_ids(a, b) + g.distance_ids(b, c));
        prop_assert!(g.distance_ids(a, b) <= g.diameter());
    }

    #[test]
    fn spheres_partition_balls((g, v) in graph_and_id(), k in 0u64..6) {
        let x = g.vertex(v);
        let ball = g.ball_size(&x, k).unwrap();
        let shells: u64 = (0..=k).map(|r| g.sphere(&x, r).unwrap().len() as u64).sum();
        prop_assert_eq!(ball, shells);
        prop_assert!(ball <= g.c(k), "c(k) is the largest ball");
    }

    #[test]
    fn quantum_min_find_is_consistent_and_charged(vals in prop::collection::vec(-50i64..50, 1..60), seed in any::<u64>()) {
        let f = TableObjective(vals.clone());
        let mut o = CountingOracle::new(&f, CostModel::quantum(), seed);
        let ids: Vec<VertexId> = (0..vals.len() as u64).collect();
        let (v, fv) = o.min_find(&ids, 0.01).unwrap();
        prop_assert!(fv >= *vals.iter().min().unwrap());
        prop_assert_eq!(vals[v as usize], fv);
        let l = o.ledger();
        prop_assert_eq!(l.phases.values().sum::<u64>(), l.charged_cost);
        prop_assert_eq!(l.charged_cost, CostModel::quantum().min_find_cost(vals.len(), 0.01));
    }

    #[test]
    fn line_rows_are_distributions(n in 2usize..12, t in 1usize..20, i in 0usize..12) {
        let i = i % n;
        let tab = line_walk_dp(n, t).unwrap();
        prop_assert!(tab.row_sum(i, t).is_one());
    }

    #[test]
    fn parity_totals_and_closed_form(m in 1usize..10, t in 0usize..16) {
        let tab = parity_dp(m, t).unwrap();
        prop_assert!(tab.total(t).is_one());
        prop_assert_eq!(parity_closed_form(m, t).unwrap(), tab.zero(t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_instance_invariants(m in 2u32..4, c in 2u32..5, seed in any::<u64>()) {
        let gw = GraphFamily::boolean(m).build().unwrap();
        let gc = GraphFamily::boolean(c).build().unwrap();
        let t_len = ((gc.order() - 1) / 2) as usize;
        let spec = WalkSpec::new(WalkRule::Neighbor, Vertex::new(vec![1; m as usize]));
        let inst = PathInstance::generate(gw, gc, spec, t_len, seed).unwrap();
        let mut path = inst.path();
        path.dedup();
        let mut sorted = path.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), path.len(), "path revisits a vertex");
        for w in path.windows(2) {
            prop_assert!(inst.product().adjacent(w[0], w[1]));
            prop_assert!(inst.eval_fx(w[1]) < inst.eval_fx(w[0]));
        }
        let rep = inst.verify_unique_local_min().unwrap();
        prop_assert!(rep.unique);
        let mut o = CountingOracle::new(&inst, CostModel::Unit, 0);
        for v in inst.product().vertex_ids() {
            let before = o.ledger().membership_queries;
            prop_assert_eq!(PathInstance::reduce_query(inst.frame(), v, &mut o), inst.eval_fx(v));
            prop_assert!(o.ledger().membership_queries - before <= 2);
        }
    }

    #[test]
    fn grid_instances_have_unique_minimum(seed in any::<u64>(), n in 4u32..10) {
        let p = grid_walk_integer(n, 2, 1, seed).unwrap();
        prop_assert!(p.verify_unique_local_min().unwrap().unique);
        let b = block_threaded_walk(BlockConfig { n: 16, d: 2, r: 0.5 }, seed).unwrap();
        prop_assert!(b.verify_unique_local_min().unwrap().unique);
        for w in b.path().windows(2) {
            prop_assert!(b.graph().adjacent(w[0], w[1]));
        }
    }

    #[test]
    fn solvers_return_local_minima(
        vals in prop::collection::vec(-20i64..20, 64),
        seed in any::<u64>(),
        alg in prop_oneof![Just(Algorithm::Steepest), Just(Algorithm::Sample), Just(Algorithm::Recursive)],
        quantum in any::<bool>(),
    ) {
        let g = GraphFamily::grid(8, 2).build().unwrap();
        let f = TableObjective(vals);
        let model = if quantum { CostModel::quantum() } else { CostModel::Unit };
        let rep = solve(&g, &f, &SolverConfig::new(alg, model, seed)).unwrap();
        prop_assert!(rep.is_local_min);
        prop_assert_eq!(rep.ledger.phases.values().sum::<u64>(), rep.ledger.charged_cost);
    }
}

#[test]
fn quantum_min_find_error_rate() {
    let vals: Vec<i64> = (0..50).rev().collect();
    let f = TableObjective(vals);
    let ids: Vec<VertexId> = (0..50).collect();
    let mut o = CountingOracle::new(&f, CostModel::quantum(), 77);
    let runs = 20_000;
    let wrong = (0..runs)
        .filter(|_| o.min_find(&ids, 0.1).unwrap().1 != 0)
        .count() as f64;
    // A random pick is still right 1 time in 50.
    let expect = runs as f64 * 0.1 * 49.0 / 50.0;
    assert!(
        (wrong - expect).abs() < 5.0 * expect.sqrt(),
        "{wrong} vs {expect}"
    );
}
