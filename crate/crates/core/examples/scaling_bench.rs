//! Median charged cost against graph size, with a log-log fit.

use lsq::bench::{run_experiment, summarize, write_csv, ExperimentConfig, FunctionKind, Source};
use lsq::{CostModel, GraphFamily};

fn main() -> lsq::Result<()> {
    let cfg = ExperimentConfig {
        graphs: [32, 64, 128].map(|n| GraphFamily::grid(n, 2)).to_vec(),
        source: Source::Synthetic {
            function: FunctionKind::Random,
        },
        solvers: vec!["recursive-r".into(), "recursive-q".into(), "sample".into()],
        model: CostModel::Unit,
        trials: 9,
        seed: 1,
        jobs: None,
    };
    let rows = run_experiment(&cfg)?;
    let rep = summarize(&rows);
    for g in &rep.groups {
        println!(
            "{:<10} {:<12} median {:>7} [{}, {}] success {:.2}",
            g.algo, g.graph, g.median_cost, g.q1_cost, g.q3_cost, g.success
        );
    }
    for f in &rep.fits {
        println!("{}: slope {:.3}", f.algo, f.slope);
    }
    write_csv(&rows[..3], std::io::stdout())?;
    Ok(())
}
