//! Acceptance suite. Each test prints one `PASS`/`FAIL` line straight to
//! stdout (not captured by the harness) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use lsq::adversary::{
    block_threaded_walk, check_two_prob_lemma, grid_walk_integer, walk2d_improved, BlockConfig,
    Instance, PathInstance, WalkRule, WalkSpec,
};
use lsq::bench::{run_experiment, summarize, ExperimentConfig, FunctionKind, Source};
use lsq::oracle::TableObjective;
use lsq::rng::{seeded, stream_seed};
use lsq::solvers::{parse_algorithm, solve, SolverConfig};
use lsq::walks::{line_max_profile, parity_closed_form, parity_dp, reflection_check};
use lsq::{CostModel, CountingOracle, Graph, GraphFamily, Objective, Vertex, VertexId};
use num_rational::BigRational;
use rand::seq::SliceRandom;

/// `max sqrt(t) * max_ij p_ij^(t)` over `2 <= n <= 64`, `t <= n^2`, as first
/// computed (attained at `n = 64`, `t = 4096`).
const C_LINE: f64 = 1.014_355_276_180_204_8;
const C_LINE_REL_TOL: f64 = 1e-9;

/// Median over `n = 2^10..2^16` of `cost / (log2 n * log2 log2 n)` for the
/// unit-cost recursive solver on random functions, 25 trials, seed 2024.
const C_POLY: f64 = 7.172;
/// Every size's ratio must lie in `[C_POLY / POLY_FACTOR, C_POLY * POLY_FACTOR]`.
const POLY_FACTOR: f64 = 2.0;
const MAX_LINE_SLOPE: f64 = 0.25;
const GRID_SLOPE: (f64, f64) = (0.7, 1.4);
const SCALING_SEED: u64 = 2024;

fn report(id: u32, name: &str, ok: bool, took: Duration, budget: Duration, detail: String) {
    let ok = ok && took <= budget;
    let line = format!(
        "criterion {id:>2} {}: {name} ({detail}; {:.2?} of {:.0?})\n",
        if ok { "PASS" } else { "FAIL" },
        took,
        budget
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(ok, "{}", line.trim());
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_01_parity_base_case() {
    let t0 = Instant::now();
    let bad: Vec<usize> = (2..=16)
        .filter(|&m| {
            parity_dp(m, 2).unwrap().zero(2) != BigRational::new(1.into(), (m as i64).into())
        })
        .collect();
    report(
        1,
        "parity base case p(2)[0] = 1/m, m = 2..16",
        bad.is_empty(),
        t0.elapsed(),
        secs(1),
        format!("mismatches {bad:?}"),
    );
}

#[test]
fn criterion_02_closed_form_matches_dp() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for m in 1..=12 {
        let dp = parity_dp(m, 40).unwrap();
        for t in 0..=40 {
            checked += 1;
            if parity_closed_form(m, t).unwrap() != dp.zero(t) {
                bad.push((m, t));
            }
        }
    }
    report(
        2,
        "closed form equals DP, m <= 12, t <= 40",
        bad.is_empty(),
        t0.elapsed(),
        secs(10),
        format!("{checked} pairs, mismatches {bad:?}"),
    );
}

#[test]
fn criterion_03_reflection_rule() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for i in 1..=4 {
        for j in 1..=4 {
            for t in 0..=14 {
                checked += 1;
                if !reflection_check(i, j, t).unwrap().equal {
                    bad.push((i, j, t));
                }
            }
        }
    }
    report(
        3,
        "reflection rule, i, j in [1,4], t <= 14",
        bad.is_empty(),
        t0.elapsed(),
        secs(60),
        format!("{checked} triples, mismatches {bad:?}"),
    );
}

#[test]
fn criterion_04_barrier_walk_sweep() {
    let t0 = Instant::now();
    let mut c = 0.0f64;
    let mut at = (0, 0);
    for n in 2..=64usize {
        let prof = line_max_profile(n, n * n).unwrap();
        for (k, p) in prof.iter().enumerate() {
            let v = ((k + 1) as f64).sqrt() * p;
            if v > c {
                c = v;
                at = (n, k + 1);
            }
        }
    }
    let stable = (c - C_LINE).abs() <= C_LINE * C_LINE_REL_TOL;
    report(
        4,
        "sqrt(t) max p(t) bounded, n <= 64, t <= n^2",
        stable && c <= C_LINE * (1.0 + C_LINE_REL_TOL),
        t0.elapsed(),
        secs(300),
        format!("max {c:.12} at (n, t) = {at:?}, pinned {C_LINE:.12}"),
    );
}

#[test]
fn criterion_05_two_probability_lemma() {
    let t0 = Instant::now();
    let cases: Vec<(Graph, WalkRule)> = vec![
        (GraphFamily::boolean(2).build().unwrap(), WalkRule::Neighbor),
        (GraphFamily::boolean(3).build().unwrap(), WalkRule::Neighbor),
        (GraphFamily::boolean(4).build().unwrap(), WalkRule::Neighbor),
        (GraphFamily::boolean(6).build().unwrap(), WalkRule::Neighbor),
        (
            GraphFamily::line(3).build().unwrap(),
            WalkRule::CoordinateCycling,
        ),
        (
            GraphFamily::line(16).build().unwrap(),
            WalkRule::CoordinateCycling,
        ),
        (
            GraphFamily::line(64).build().unwrap(),
            WalkRule::CoordinateCycling,
        ),
        (
            GraphFamily::grid(3, 2).build().unwrap(),
            WalkRule::CoordinateCycling,
        ),
        (
            GraphFamily::grid(8, 2).build().unwrap(),
            WalkRule::CoordinateCycling,
        ),
        (
            GraphFamily::grid(4, 3).build().unwrap(),
            WalkRule::CoordinateCycling,
        ),
    ];
    let mut tuples = 0;
    let mut violations = 0;
    let mut worst = 0.0f64;
    for (g, rule) in &cases {
        let spec = WalkSpec::new(*rule, Vertex::new(vec![1; g.dim()]));
        let rep = check_two_prob_lemma(g, &spec, 12).unwrap();
        tuples += rep.tuples_checked;
        violations += rep.violations;
        worst = worst.max(rep.max_ratio);
    }
    report(
        5,
        "q <= 2p on walks with <= 64 states, horizon 12",
        violations == 0 && tuples > 0,
        t0.elapsed(),
        secs(120),
        format!("{tuples} tuples, {violations} violations, max q/p {worst:.4}"),
    );
}

fn product_b3_b4(seed: u64) -> PathInstance {
    let gw = GraphFamily::boolean(3).build().unwrap();
    let gc = GraphFamily::boolean(4).build().unwrap();
    let spec = WalkSpec::new(WalkRule::Neighbor, Vertex::new([1, 1, 1]));
    PathInstance::generate(gw, gc, spec, 7, seed).unwrap()
}

fn small_instances(seed: u64) -> Vec<Instance> {
    vec![
        Instance::Product(product_b3_b4(seed)),
        Instance::GridIntM {
            n: 16,
            d: 2,
            m: 1,
            inner: grid_walk_integer(16, 2, 1, seed).unwrap(),
        },
        Instance::Block(
            block_threaded_walk(
                BlockConfig {
                    n: 16,
                    d: 2,
                    r: 0.5,
                },
                seed,
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn criterion_06_instance_validity() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for seed in 0..100 {
        for inst in small_instances(seed) {
            checked += 1;
            let rep = inst.verify_unique_local_min().unwrap();
            let end = inst.graph().vertex(inst.end());
            if !rep.unique || rep.local_minima != vec![end] {
                bad.push((inst.kind(), seed));
            }
        }
    }
    report(
        6,
        "unique local minimum at the trajectory end, 100 seeds x 3 instances",
        bad.is_empty(),
        t0.elapsed(),
        secs(300),
        format!("{checked} instances, failures {bad:?}"),
    );
}

#[test]
fn criterion_07_reduction_cost() {
    let t0 = Instant::now();
    let mut calls = 0u64;
    let mut max_q = 0u64;
    let mut wrong = 0u64;
    for seed in 0..100 {
        for inst in small_instances(seed) {
            // The block instance reduces through its virtual product.
            let p = match &inst {
                Instance::Product(p) | Instance::GridIntM { inner: p, .. } => p,
                Instance::Block(b) => b.virtual_instance(),
                Instance::TwoD(_) => unreachable!(),
            };
            let mut o = CountingOracle::new(p, CostModel::Unit, 0);
            for v in p.product().vertex_ids() {
                let before = o.ledger().membership_queries;
                let got = PathInstance::reduce_query(p.frame(), v, &mut o);
                let q = o.ledger().membership_queries - before;
                calls += 1;
                max_q = max_q.max(q);
                if got != p.eval_fx(v) {
                    wrong += 1;
                }
            }
        }
    }
    report(
        7,
        "reduction matches f with <= 2 membership queries",
        wrong == 0 && max_q <= 2,
        t0.elapsed(),
        secs(300),
        format!("{calls} calls, {wrong} wrong, max queries {max_q}"),
    );
}

#[test]
fn criterion_08_solver_soundness() {
    let t0 = Instant::now();
    let solvers = ["steepest", "sample", "recursive"];
    let graphs = [
        GraphFamily::line(200),
        GraphFamily::grid(20, 2),
        GraphFamily::boolean(8),
        GraphFamily::grid(6, 3),
    ];
    let mut trials = 0;
    let mut failures = Vec::new();
    let mut run = |g: &Graph, f: &dyn Objective, algo: &str, seed: u64, label: &str| {
        let (alg, _) = parse_algorithm(algo).unwrap();
        let rep = solve(g, f, &SolverConfig::new(alg, CostModel::Unit, seed)).unwrap();
        trials += 1;
        if !rep.is_local_min {
            failures.push(format!("{algo} on {g} ({label}, seed {seed})"));
        }
    };
    for fam in &graphs {
        let g = fam.build().unwrap();
        for seed in 0..20 {
            let mut v: Vec<i64> = (0..g.order() as i64).collect();
            v.shuffle(&mut seeded(stream_seed(seed, 2)));
            let random = TableObjective(v);
            let constant = |_: VertexId| 5i64;
            for algo in solvers {
                run(&g, &random, algo, seed, "random");
                run(&g, &constant, algo, seed, "constant");
            }
        }
    }
    for seed in 0..20 {
        let mut adversarial = small_instances(seed);
        adversarial.push(Instance::TwoD(walk2d_improved(243, seed).unwrap()));
        for inst in &adversarial {
            for algo in solvers {
                run(inst.graph(), inst, algo, seed, inst.kind());
            }
        }
    }
    report(
        8,
        "every unit-cost solver returns a local minimum",
        failures.is_empty() && trials >= 500,
        t0.elapsed(),
        secs(600),
        format!("{trials} trials, failures {failures:?}"),
    );
}

#[test]
fn criterion_09_success_event() {
    let t0 = Instant::now();
    let g = GraphFamily::grid(64, 2).build().unwrap();
    let mut good = 0;
    for seed in 0..50u64 {
        let mut v: Vec<i64> = (0..g.order() as i64).collect();
        v.shuffle(&mut seeded(stream_seed(seed, 2)));
        let f = TableObjective(v);
        let (alg, model) = parse_algorithm("recursive-r").unwrap();
        let rep = solve(&g, &f, &SolverConfig::new(alg, model.unwrap(), seed)).unwrap();
        assert!(rep.is_local_min);
        if rep.descent_len <= 10 {
            good += 1;
        }
    }
    report(
        9,
        "final descent <= 10 in at least half of 50 runs on grid(64,2)",
        good * 2 >= 50,
        t0.elapsed(),
        secs(600),
        format!("{good}/50 runs"),
    );
}

fn scaling(graphs: Vec<GraphFamily>) -> lsq::bench::ScalingReport {
    let cfg = ExperimentConfig {
        graphs,
        source: Source::Synthetic {
            function: FunctionKind::Random,
        },
        solvers: vec!["recursive-r".into()],
        model: CostModel::Unit,
        trials: 25,
        seed: SCALING_SEED,
        jobs: None,
    };
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.is_local_min));
    summarize(&rows)
}

#[test]
fn criterion_10_grid_scaling() {
    let t0 = Instant::now();
    let rep = scaling([32, 64, 128, 256].map(|n| GraphFamily::grid(n, 2)).to_vec());
    let slope = rep.fits[0].slope;
    let medians: Vec<f64> = rep.groups.iter().map(|g| g.median_cost).collect();
    report(
        10,
        "recursive-r on grid(n,2), log-log slope in [0.7, 1.4]",
        (GRID_SLOPE.0..=GRID_SLOPE.1).contains(&slope),
        t0.elapsed(),
        secs(1800),
        format!("slope {slope:.3}, medians {medians:?}"),
    );
}

#[test]
fn criterion_11_line_scaling() {
    let t0 = Instant::now();
    let rep = scaling((10..=16).map(|e| GraphFamily::line(1 << e)).collect());
    let slope = rep.fits[0].slope;
    let ratios: Vec<f64> = rep
        .groups
        .iter()
        .map(|g| {
            let l = (g.n as f64).log2();
            g.median_cost / (l * l.log2())
        })
        .collect();
    let within = ratios
        .iter()
        .all(|r| (C_POLY / POLY_FACTOR..=C_POLY * POLY_FACTOR).contains(r));
    report(
        11,
        "recursive-r on line(n), slope <= 0.25 and within a factor 2 of C log n log log n",
        slope <= MAX_LINE_SLOPE && within,
        t0.elapsed(),
        secs(600),
        format!(
            "slope {slope:.3}, ratios {:?}, pinned C {C_POLY}",
            ratios
                .iter()
                .map(|r| (r * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_12_block_segments() {
    let t0 = Instant::now();
    let inst = block_threaded_walk(
        BlockConfig {
            n: 81,
            d: 2,
            r: 0.5,
        },
        12,
    )
    .unwrap();
    let segs = inst.segments();
    let mut seen = std::collections::HashSet::new();
    let mut overlap = 0;
    let mut clock_moves = 0;
    for s in segs {
        for &i in &s.positions {
            if !seen.insert(inst.path()[i]) {
                overlap += 1;
            }
        }
        let c0 = inst.clock_at(s.positions[0]);
        clock_moves += s
            .positions
            .iter()
            .filter(|&&i| inst.clock_at(i) != c0)
            .count();
    }
    report(
        12,
        "block-changing segments disjoint with constant clock, n = 81, d = 2",
        !segs.is_empty() && overlap == 0 && clock_moves == 0,
        t0.elapsed(),
        secs(60),
        format!(
            "{} segments, {overlap} shared vertices, {clock_moves} clock changes",
            segs.len()
        ),
    );
}
