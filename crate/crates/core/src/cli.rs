//! Command-line front end for the `lsq` binary.
//!
//! ```text
//! lsq [--seed S] [--out PATH] [--format json|csv] [--jobs J] <command>
//!   gen    --graph SPEC --gen KIND[:k=v,...]
//!   solve  (--graph SPEC --function KIND | --instance FILE) --algo ID
//!   walk   line|parity|closed-form|recursion|reflection|profile|lemma ...
//!   verify --instance FILE
//!   bench  --graph SPEC... --algo ID... --trials K
//! ```

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::adversary::{
    block_threaded_walk, check_two_prob_lemma, grid_walk_integer, hypercube_decomposition,
    walk2d_improved, BlockConfig, BoundMode, Instance, PathInstance, WalkRule, WalkSpec,
};
use crate::bench::{
    run_experiment, summarize, synthetic, write_csv, ExperimentConfig, FunctionKind, Source,
};
use crate::error::{input, Error, Result};
use crate::graph::{Graph, GraphFamily, Vertex};
use crate::oracle::{CostModel, CountingOracle};
use crate::solvers::{parse_algorithm, solve, SolverConfig};
use crate::walks::{
    bound_estimate, line_walk_dp, parity_closed_form, parity_dp, parity_recursion_check,
    pt_profile, reflection_check, to_f64, WalkKind,
};

#[derive(Parser, Debug)]
#[command(
    name = "lsq",
    version,
    about = "Local Search query-complexity laboratory"
)]
pub struct Cli {
    /// Base RNG seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for `bench`.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a hard instance.
    Gen(GenArgs),
    /// Run a solver and report its query ledger.
    Solve(SolveArgs),
    /// Exact walk tables and bound estimates.
    Walk {
        #[command(subcommand)]
        what: WalkCommand,
    },
    /// Check an instance file: unique local minimum, and for product
    /// instances the two-query membership reduction.
    Verify {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Repeated trials over several graph sizes.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// e.g. `boolean:n=10`, `grid:n=64,d=2`, `line:n=4*line:n=9`.
    #[arg(long)]
    pub graph: String,
    /// `product[:m=M|mode=randomized|quantum]`, `block:r=R`, `2d-improved`.
    #[arg(long = "gen")]
    pub generator: String,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(
        long,
        conflicts_with = "instance",
        required_unless_present = "instance"
    )]
    pub graph: Option<String>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// identity, random, constant or ramp.
    #[arg(long, default_value = "random")]
    pub function: String,
    /// steepest, sample, recursive, recursive-r, recursive-q.
    #[arg(long, default_value = "recursive")]
    pub algo: String,
    #[arg(long, value_enum, default_value_t = Model::Unit)]
    pub model: Model,
    /// Start vertex for steepest descent, comma-separated coordinates.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Record the per-round progress check.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Unit,
    Quantum,
}

impl From<Model> for CostModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Unit => CostModel::Unit,
            Model::Quantum => CostModel::quantum(),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum WalkCommand {
    /// Exact `p_ij^(t)` of the barrier line walk.
    Line {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        horizon: usize,
    },
    /// Exact parity-walk distribution on `B^m`.
    Parity {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        horizon: usize,
    },
    /// Closed form of `p_m^(t)[0...0]`.
    ClosedForm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
    },
    /// Which recursion identities hold at `(m, t)`.
    Recursion {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
    },
    /// Reflection rule by enumeration.
    Reflection {
        #[arg(long)]
        i: i64,
        #[arg(long)]
        j: i64,
        #[arg(long)]
        t: u32,
    },
    /// `p_t` profile and bound estimates: `hypercube:m=6`,
    /// `grid-cycling:n=16,m=1`, `line:n=16`.
    Profile {
        #[arg(long)]
        walk: String,
        #[arg(long = "T")]
        t_len: usize,
    },
    /// Exact check of the two-probability inequality on a small graph.
    Lemma {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Rule::Neighbor)]
        rule: Rule,
        #[arg(long)]
        horizon: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Neighbor,
    CoordinateCycling,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Repeatable.
    #[arg(long, required_unless_present = "instance")]
    pub graph: Vec<String>,
    #[arg(long, conflicts_with = "graph")]
    pub instance: Option<PathBuf>,
    /// Repeatable.
    #[arg(long, required = true)]
    pub algo: Vec<String>,
    #[arg(long, default_value = "random")]
    pub function: String,
    #[arg(long, value_enum, default_value_t = Model::Unit)]
    pub model: Model,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
}

/// How a command ended, beyond errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    VerificationFailed,
}

/// Exit status for a finished command: 0 success, 1 verification failure,
/// 2 bad input.
pub fn exit_code(r: &Result<Outcome>) -> i32 {
    match r {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::VerificationFailed) => 1,
        Err(Error::Input(_)) | Err(Error::Budget { .. }) | Err(Error::Undefined(_)) => 2,
        Err(_) => 1,
    }
}

struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    fn write(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, text)?,
            None => {
                let mut o = std::io::stdout().lock();
                o.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    o.write_all(b"\n")?;
                }
            }
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, v: &T) -> Result<()> {
        self.write(&serde_json::to_string_pretty(v)?)
    }
}

/// Human-readable notes go to stderr so stdout stays machine-readable.
fn note(msg: impl AsRef<str>) {
    eprintln!("{}", msg.as_ref());
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let sink = Sink {
        path: cli.out.clone(),
    };
    match cli.command {
        Command::Gen(a) => gen(&a, cli.seed, &sink),
        Command::Solve(a) => solve_cmd(&a, cli.seed, &sink),
        Command::Walk { what } => walk(what, cli.format, &sink),
        Command::Verify { instance } => verify(&instance, &sink),
        Command::Bench(a) => bench(&a, cli.seed, cli.jobs, cli.format, &sink),
    }
}

fn parse_kv(s: &str) -> Result<(String, Vec<(String, String)>)> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut kv = Vec::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("expected key=value, got {part:?}")))?;
        kv.push((k.trim().to_owned(), v.trim().to_owned()));
    }
    Ok((kind.trim().to_owned(), kv))
}

fn get<T: std::str::FromStr>(kv: &[(String, String)], key: &str) -> Result<Option<T>> {
    match kv.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::Input(format!("bad value for {key}: {v:?}"))),
    }
}

#[derive(Serialize)]
struct GenSummary {
    kind: &'static str,
    graph: String,
    /// Walk steps.
    #[serde(rename = "T")]
    t_len: usize,
    /// Vertices on the hidden path.
    #[serde(rename = "L")]
    path_len: usize,
    /// Vertices of the graph.
    #[serde(rename = "N")]
    order: u64,
    preset: Option<String>,
}

fn gen(a: &GenArgs, seed: u64, sink: &Sink) -> Result<Outcome> {
    let family: GraphFamily = a.graph.parse()?;
    let (kind, kv) = parse_kv(&a.generator)?;
    let mut preset = None;
    let inst = match (kind.as_str(), &family) {
        ("product", GraphFamily::Hypercube { k: 2, l }) => {
            let mode: BoundMode = get(&kv, "mode")?.unwrap_or(BoundMode::Randomized);
            let dec = hypercube_decomposition(*l, mode)?;
            let m = get::<u32>(&kv, "m")?.unwrap_or(dec.m);
            if m == 0 || m >= *l {
                return input(format!("need 1 <= m < {l}"));
            }
            preset = Some(format!("{mode:?} m = {m}").to_lowercase());
            let gw = GraphFamily::boolean(m).build()?;
            let gc = GraphFamily::boolean(l - m).build()?;
            let t_len = ((gc.order() - 1) / 2) as usize;
            let spec = WalkSpec::new(WalkRule::Neighbor, Vertex::new(vec![1; m as usize]));
            Instance::Product(PathInstance::generate(gw, gc, spec, t_len, seed)?)
        }
        ("product", GraphFamily::Grid { n, d }) => {
            let m = get::<u32>(&kv, "m")?
                .ok_or_else(|| Error::Input("grid product needs m=...".into()))?;
            preset = Some(format!("m = {m}"));
            Instance::GridIntM {
                n: *n,
                d: *d,
                m,
                inner: grid_walk_integer(*n, *d, m, seed)?,
            }
        }
        ("product", GraphFamily::Product { left, right }) => {
            let gw = left.build()?;
            let gc = right.build()?;
            let rule = if gw.axes().iter().all(|&k| k <= 2) {
                WalkRule::Neighbor
            } else {
                WalkRule::CoordinateCycling
            };
            let t_len = ((gc.order() - 1) / 2) as usize;
            let spec = WalkSpec::new(rule, Vertex::new(vec![1; gw.dim()]));
            Instance::Product(PathInstance::generate(gw, gc, spec, t_len, seed)?)
        }
        ("block", GraphFamily::Grid { n, d }) => {
            let r: f64 = get(&kv, "r")?.unwrap_or(0.5);
            preset = Some(format!("r = {r}"));
            Instance::Block(block_threaded_walk(BlockConfig { n: *n, d: *d, r }, seed)?)
        }
        ("2d-improved" | "2d", GraphFamily::Grid { n, d: 2 }) => {
            let inst = walk2d_improved(*n as u64, seed)?;
            Instance::TwoD(inst)
        }
        (k, _) => {
            return input(format!(
                "generator {k:?} does not apply to {}",
                family_name(&family)?
            ))
        }
    };
    let summary = GenSummary {
        kind: inst.kind(),
        graph: inst.graph().to_string(),
        t_len: inst.steps(),
        path_len: inst.path_len(),
        order: inst.graph().order(),
        preset,
    };
    match &sink.path {
        Some(p) => {
            inst.save(p)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        None => {
            note(serde_json::to_string(&summary)?);
            sink.write(&inst.to_json()?)?;
        }
    }
    Ok(Outcome::Ok)
}

fn family_name(f: &GraphFamily) -> Result<String> {
    Ok(f.build()?.to_string())
}

fn parse_vertex(s: &str) -> Result<Vertex> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| Error::Input(format!("bad coordinate {c:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Vertex::new)
}

fn solve_cmd(a: &SolveArgs, seed: u64, sink: &Sink) -> Result<Outcome> {
    let (alg, fixed) = parse_algorithm(&a.algo)?;
    let mut cfg = SolverConfig::new(alg, fixed.unwrap_or(a.model.into()), seed);
    cfg.start = a.start.as_deref().map(parse_vertex).transpose()?;
    cfg.samples = a.samples;
    cfg.audit = a.audit;
    let rep = match (&a.instance, &a.graph) {
        (Some(path), _) => {
            let inst = Instance::load(path)?;
            solve(inst.graph(), &inst, &cfg)?
        }
        (None, Some(spec)) => {
            let g: Graph = spec.parse::<GraphFamily>()?.build()?;
            let kind: FunctionKind = a.function.parse()?;
            let f = synthetic(&g, kind, seed)?;
            solve(&g, &f, &cfg)?
        }
        (None, None) => return input("give --graph or --instance"),
    };
    sink.json(&rep)?;
    Ok(Outcome::Ok)
}

fn walk(what: WalkCommand, format: Format, sink: &Sink) -> Result<Outcome> {
    match what {
        WalkCommand::Line { n, horizon } => {
            let tab = line_walk_dp(n, horizon)?;
            match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    tab.write_csv(&mut buf)?;
                    sink.write(&String::from_utf8_lossy(&buf))?;
                }
                Format::Json => {
                    let max: Vec<String> =
                        (1..=horizon).map(|t| tab.max_p(t).to_string()).collect();
                    sink.json(&serde_json::json!({ "n": n, "horizon": horizon, "max_p": max }))?;
                }
            }
        }
        WalkCommand::Parity { m, horizon } => {
            let tab = parity_dp(m, horizon)?;
            match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    tab.write_csv(&mut buf)?;
                    sink.write(&String::from_utf8_lossy(&buf))?;
                }
                Format::Json => {
                    let zero: Vec<String> =
                        (0..=horizon).map(|t| tab.zero(t).to_string()).collect();
                    sink.json(&serde_json::json!({ "m": m, "horizon": horizon, "zero": zero }))?;
                }
            }
        }
        WalkCommand::ClosedForm { m, t } => {
            let cf = parity_closed_form(m, t)?;
            let dp = parity_dp(m, t)?.zero(t);
            sink.json(&serde_json::json!({
                "m": m, "t": t,
                "closed_form": cf.to_string(),
                "dp": dp.to_string(),
                "equal": cf == dp,
                "value": to_f64(&cf),
            }))?;
        }
        WalkCommand::Recursion { m, t } => sink.json(&parity_recursion_check(m, t)?)?,
        WalkCommand::Reflection { i, j, t } => {
            let c = reflection_check(i, j, t)?;
            sink.json(&c)?;
            if !c.equal {
                return Ok(Outcome::VerificationFailed);
            }
        }
        WalkCommand::Profile { walk, t_len } => {
            let kind = parse_walk_kind(&walk)?;
            let prof = pt_profile(kind, t_len)?;
            let est = bound_estimate(&prof);
            sink.json(&serde_json::json!({ "profile": prof, "estimate": est }))?;
        }
        WalkCommand::Lemma {
            graph,
            rule,
            horizon,
        } => {
            let g = graph.parse::<GraphFamily>()?.build()?;
            let rule = match rule {
                Rule::Neighbor => WalkRule::Neighbor,
                Rule::CoordinateCycling => WalkRule::CoordinateCycling,
            };
            let spec = WalkSpec::new(rule, Vertex::new(vec![1; g.dim()]));
            let rep = check_two_prob_lemma(&g, &spec, horizon)?;
            sink.json(&rep)?;
            if rep.violations > 0 {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn parse_walk_kind(s: &str) -> Result<WalkKind> {
    let (kind, kv) = parse_kv(s)?;
    let need = |key: &str| -> Result<usize> {
        get(&kv, key)?.ok_or_else(|| Error::Input(format!("{kind} needs {key}=...")))
    };
    Ok(match kind.as_str() {
        "hypercube" => WalkKind::Hypercube { m: need("m")? },
        "grid-cycling" | "grid" => WalkKind::GridCycling {
            n: need("n")?,
            m: need("m")?,
        },
        "line" => WalkKind::Line { n: need("n")? },
        other => return input(format!("unknown walk {other:?}")),
    })
}

#[derive(Serialize)]
struct VerifyReport {
    kind: &'static str,
    graph: String,
    unique_local_min: bool,
    local_minima: Vec<Vertex>,
    /// Product instances only: every vertex's reduced value matched with at
    /// most two membership queries.
    reduction_ok: Option<bool>,
    max_membership_queries: Option<u64>,
}

fn verify(path: &std::path::Path, sink: &Sink) -> Result<Outcome> {
    let inst = Instance::load(path)?;
    let rep = inst.verify_unique_local_min()?;
    let (reduction_ok, max_q) = match &inst {
        Instance::Product(p) | Instance::GridIntM { inner: p, .. } => {
            let mut ok = true;
            let mut max_q = 0;
            for v in p.product().vertex_ids() {
                let mut o = CountingOracle::new(p, CostModel::Unit, 0);
                let got = PathInstance::reduce_query(p.frame(), v, &mut o);
                let q = o.ledger().membership_queries;
                max_q = max_q.max(q);
                ok &= got == p.eval_fx(v) && q <= 2;
            }
            (Some(ok), Some(max_q))
        }
        _ => (None, None),
    };
    let pass = rep.unique && reduction_ok.unwrap_or(true);
    sink.json(&VerifyReport {
        kind: inst.kind(),
        graph: inst.graph().to_string(),
        unique_local_min: rep.unique,
        local_minima: rep.local_minima,
        reduction_ok,
        max_membership_queries: max_q,
    })?;
    Ok(if pass {
        Outcome::Ok
    } else {
        Outcome::VerificationFailed
    })
}

fn bench(
    a: &BenchArgs,
    seed: u64,
    jobs: Option<usize>,
    format: Format,
    sink: &Sink,
) -> Result<Outcome> {
    let source = match &a.instance {
        Some(path) => Source::Instance { path: path.clone() },
        None => Source::Synthetic {
            function: a.function.parse()?,
        },
    };
    let cfg = ExperimentConfig {
        graphs: a.graph.iter().map(|g| g.parse()).collect::<Result<_>>()?,
        source,
        solvers: a.algo.clone(),
        model: a.model.into(),
        trials: a.trials,
        seed,
        jobs,
    };
    let rows = run_experiment(&cfg)?;
    let report = summarize(&rows);
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            sink.write(&String::from_utf8_lossy(&buf))?;
            for f in &report.fits {
                note(format!(
                    "{}: slope {:.3} over {} sizes",
                    f.algo, f.slope, f.points
                ));
            }
        }
        Format::Json => sink.json(&serde_json::json!({ "rows": rows, "report": report }))?,
    }
    Ok(Outcome::Ok)
}
