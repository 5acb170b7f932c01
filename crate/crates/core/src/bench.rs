//! Repeated solver trials over graph sizes, with CSV output and log-log
//! scaling fits.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::Instance;
use crate::error::{input, Error, Result};
use crate::graph::{Graph, GraphFamily, VertexId};
use crate::oracle::{CostModel, Objective, TableObjective};
use crate::rng::{seeded, stream_seed};
use crate::solvers::{parse_algorithm, solve, SolverConfig};

/// Largest graph a synthetic permutation table is built for.
pub const MAX_TABLE_VERTICES: u64 = 1 << 26;

/// Synthetic objective families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    /// `f(v) = id(v)`.
    Identity,
    /// A uniformly random injective function, drawn per trial.
    Random,
    /// `f = 0`; every vertex is a local minimum.
    Constant,
    /// `f(v) = -rank(v)` along the Hamilton path. On a line this is one
    /// long monotone path.
    Ramp,
}

impl std::str::FromStr for FunctionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" | "linear" => FunctionKind::Identity,
            "random" => FunctionKind::Random,
            "constant" => FunctionKind::Constant,
            "ramp" => FunctionKind::Ramp,
            _ => return input(format!("unknown function kind {s:?}")),
        })
    }
}

/// Where each trial's objective comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Source {
    Synthetic {
        function: FunctionKind,
    },
    /// A fixed instance file; `graphs` is ignored.
    Instance {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graphs: Vec<GraphFamily>,
    pub source: Source,
    /// Algorithm ids as accepted by [`parse_algorithm`].
    pub solvers: Vec<String>,
    /// Model used when the id does not fix one.
    #[serde(default)]
    pub model: CostModel,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; all cores when absent.
    #[serde(default)]
    pub jobs: Option<usize>,
}

/// One solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub algo: String,
    pub graph: String,
    pub n: u64,
    pub d: u64,
    pub seed: u64,
    pub value_queries: u64,
    pub membership_queries: u64,
    pub charged_cost: u64,
    pub descent_len: u64,
    pub is_local_min: bool,
    pub wall_ms: f64,
}

/// Size parameters reported as `n` and `d`: side and dimension for lines
/// and grids, `k` and `l` for hypercubes, order and dimension otherwise.
pub fn size_params(g: &Graph) -> (u64, u64) {
    match g.family() {
        GraphFamily::Line { n } => (*n as u64, 1),
        GraphFamily::Grid { n, d } => (*n as u64, *d as u64),
        GraphFamily::Hypercube { k, l } => (*k as u64, *l as u64),
        GraphFamily::Product { .. } => (g.order(), g.dim() as u64),
    }
}

/// Objective drawn from a [`FunctionKind`].
pub enum SyntheticObjective {
    Table(TableObjective),
    Ramp(Graph),
    Identity,
    Constant,
}

impl Objective for SyntheticObjective {
    fn value(&self, v: VertexId) -> i64 {
        match self {
            SyntheticObjective::Table(t) => t.value(v),
            SyntheticObjective::Ramp(g) => -(g.hamilton_rank(&g.vertex(v)).unwrap_or(0) as i64),
            SyntheticObjective::Identity => v as i64,
            SyntheticObjective::Constant => 0,
        }
    }
}

/// Builds the trial objective; `Random` draws from `stream_seed(seed, 2)`.
pub fn synthetic(g: &Graph, kind: FunctionKind, seed: u64) -> Result<SyntheticObjective> {
    Ok(match kind {
        FunctionKind::Identity => SyntheticObjective::Identity,
        FunctionKind::Constant => SyntheticObjective::Constant,
        FunctionKind::Ramp => SyntheticObjective::Ramp(g.clone()),
        FunctionKind::Random => {
            if g.order() > MAX_TABLE_VERTICES {
                return Err(Error::Budget {
                    what: "random function table",
                    needed: g.order() as u128,
                    limit: MAX_TABLE_VERTICES as u128,
                });
            }
            let mut v: Vec<i64> = (0..g.order() as i64).collect();
            v.shuffle(&mut seeded(stream_seed(seed, 2)));
            SyntheticObjective::Table(TableObjective(v))
        }
    })
}

fn run_one<F: Objective + ?Sized>(
    g: &Graph,
    f: &F,
    algo: &str,
    default_model: CostModel,
    seed: u64,
) -> Result<TrialRow> {
    let (alg, model) = parse_algorithm(algo)?;
    let cfg = SolverConfig::new(alg, model.unwrap_or(default_model), seed);
    let t0 = Instant::now();
    let rep = solve(g, f, &cfg)?;
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let (n, d) = size_params(g);
    Ok(TrialRow {
        algo: algo.to_owned(),
        graph: g.to_string(),
        n,
        d,
        seed,
        value_queries: rep.ledger.value_queries,
        membership_queries: rep.ledger.membership_queries,
        charged_cost: rep.ledger.charged_cost,
        descent_len: rep.descent_len,
        is_local_min: rep.is_local_min,
        wall_ms,
    })
}

/// Runs every (graph, solver, trial) combination. Trial `i` uses seed
/// `stream_seed(seed, i)`; rows come back in a fixed order regardless of
/// thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRow>> {
    if cfg.trials == 0 || cfg.solvers.is_empty() {
        return input("need at least one trial and one solver");
    }
    for s in &cfg.solvers {
        parse_algorithm(s)?;
    }
    let instance = match &cfg.source {
        Source::Instance { path } => Some(Instance::load(path)?),
        Source::Synthetic { .. } => None,
    };
    let graphs: Vec<Graph> = match &instance {
        Some(inst) => vec![inst.graph().clone()],
        None => {
            if cfg.graphs.is_empty() {
                return input("no graphs given");
            }
            cfg.graphs
                .iter()
                .map(|f| f.build())
                .collect::<Result<_>>()?
        }
    };
    let mut tasks = Vec::new();
    for (gi, _) in graphs.iter().enumerate() {
        for (si, _) in cfg.solvers.iter().enumerate() {
            for trial in 0..cfg.trials {
                tasks.push((gi, si, trial));
            }
        }
    }
    let run = || -> Result<Vec<TrialRow>> {
        tasks
            .par_iter()
            .map(|&(gi, si, trial)| {
                let g = &graphs[gi];
                let seed = stream_seed(cfg.seed, trial as u64);
                match (&instance, &cfg.source) {
                    (Some(inst), _) => run_one(g, inst, &cfg.solvers[si], cfg.model, seed),
                    (None, Source::Synthetic { function }) => {
                        let f = synthetic(g, *function, seed)?;
                        run_one(g, &f, &cfg.solvers[si], cfg.model, seed)
                    }
                    (None, Source::Instance { .. }) => unreachable!(),
                }
            })
            .collect()
    };
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Input(e.to_string()))?
            .install(run),
        None => run(),
    }
}

pub fn write_csv<W: Write>(rows: &[TrialRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(crate::walks::line::csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Summary of one (solver, graph) group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub algo: String,
    pub graph: String,
    pub n: u64,
    pub d: u64,
    pub trials: usize,
    pub median_cost: f64,
    pub q1_cost: f64,
    pub q3_cost: f64,
    pub success: f64,
    pub mean_descent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub algo: String,
    /// Least-squares slope of `ln(median cost)` against `ln n`.
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub groups: Vec<GroupSummary>,
    pub fits: Vec<ScalingFit>,
}

/// Linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Ordinary least squares `y = a + b x`; returns `(b, a)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (b, my - b * mx)
}

/// Groups rows and fits a slope per solver over groups with at least 5
/// trials. Fits need two distinct sizes.
pub fn summarize(rows: &[TrialRow]) -> ScalingReport {
    let mut keys: Vec<(String, String, u64, u64)> = Vec::new();
    for r in rows {
        let k = (r.algo.clone(), r.graph.clone(), r.n, r.d);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let groups: Vec<GroupSummary> = keys
        .into_iter()
        .map(|(algo, graph, n, d)| {
            let g: Vec<&TrialRow> = rows
                .iter()
                .filter(|r| r.algo == algo && r.graph == graph)
                .collect();
            let mut costs: Vec<f64> = g.iter().map(|r| r.charged_cost as f64).collect();
            costs.sort_by(f64::total_cmp);
            let k = g.len() as f64;
            GroupSummary {
                trials: g.len(),
                median_cost: quantile(&costs, 0.5),
                q1_cost: quantile(&costs, 0.25),
                q3_cost: quantile(&costs, 0.75),
                success: g.iter().filter(|r| r.is_local_min).count() as f64 / k,
                mean_descent: g.iter().map(|r| r.descent_len as f64).sum::<f64>() / k,
                algo,
                graph,
                n,
                d,
            }
        })
        .collect();
    let mut algos: Vec<&str> = Vec::new();
    for g in &groups {
        if !algos.contains(&g.algo.as_str()) {
            algos.push(&g.algo);
        }
    }
    let fits = algos
        .into_iter()
        .filter_map(|a| {
            let pts: Vec<&GroupSummary> = groups
                .iter()
                .filter(|g| g.algo == a && g.trials >= 5 && g.median_cost > 0.0)
                .collect();
            let xs: Vec<f64> = pts.iter().map(|g| (g.n as f64).ln()).collect();
            let ys: Vec<f64> = pts.iter().map(|g| g.median_cost.ln()).collect();
            if xs.iter().any(|&x| x != xs[0]) {
                let (slope, intercept) = fit_line(&xs, &ys);
                Some(ScalingFit {
                    algo: a.to_owned(),
                    slope,
                    intercept,
                    points: pts.len(),
                })
            } else {
                None
            }
        })
        .collect();
    ScalingReport { groups, fits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(graphs: Vec<GraphFamily>, solvers: &[&str], trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            graphs,
            source: Source::Synthetic {
                function: FunctionKind::Random,
            },
            solvers: solvers.iter().map(|s| s.to_string()).collect(),
            model: CostModel::Unit,
            trials,
            seed: 11,
            jobs: None,
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut c = cfg(
            vec![GraphFamily::grid(20, 2)],
            &["recursive-r", "sample"],
            6,
        );
        c.jobs = Some(1);
        let a = run_experiment(&c).unwrap();
        c.jobs = Some(4);
        let b = run_experiment(&c).unwrap();
        let strip = |rows: &[TrialRow]| {
            rows.iter()
                .map(|r| (r.algo.clone(), r.seed, r.charged_cost, r.is_local_min))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        assert!(a.iter().all(|r| r.is_local_min));
    }

    #[test]
    fn csv_header_order() {
        let c = cfg(vec![GraphFamily::line(50)], &["steepest"], 2);
        let rows = run_experiment(&c).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "algo,graph,n,d,seed,value_queries,membership_queries,charged_cost,descent_len,is_local_min,wall_ms"
        );
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn ramp_slope_is_linear() {
        let graphs = [256, 512, 1024, 2048].map(GraphFamily::line).to_vec();
        let mut c = cfg(graphs, &["steepest"], 10);
        c.source = Source::Synthetic {
            function: FunctionKind::Ramp,
        };
        let rep = summarize(&run_experiment(&c).unwrap());
        assert_eq!(rep.groups.len(), 4);
        let fit = &rep.fits[0];
        assert!((fit.slope - 1.0).abs() < 0.25, "slope {}", fit.slope);
    }

    #[test]
    fn quantiles_and_fit() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&xs, 0.5), 2.5);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        let (b, a) = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((b - 2.0).abs() < 1e-12 && (a - 1.0).abs() < 1e-12);
    }
}
