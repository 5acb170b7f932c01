//! Hard instances for Local Search built from clocked random walks.
//!
//! A random walk runs in a "walk" graph `Gw`, while a one-way walk along a
//! self-avoiding path of a "clock" graph `Gc` records how many steps were
//! taken. The product of the two is a self-avoiding path `X` in `Gw x Gc`,
//! and [`PathInstance::eval_fx`] turns it into a function whose only local
//! minimum is the end of `X`.

use std::collections::{HashMap, HashSet};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::graph::{Graph, GraphFamily, Vertex, VertexId};
use crate::oracle::{CountingOracle, Membership, Objective};
use crate::rng::seeded;

pub mod file;
pub mod grid;
pub mod lemma;
pub mod walk2d;

pub use file::{Instance, InstanceFile};
pub use grid::{block_threaded_walk, grid_walk_integer, BlockConfig, BlockInstance};
pub use lemma::{check_two_prob_lemma, conditional_hit_probability, HitProbabilities, LemmaReport};
pub use walk2d::{nearest_valid_2d_n, walk2d_improved, TwoDWalkInstance};

/// Largest graph [`verify_unique_local_min`] will enumerate.
pub const MAX_VERIFY_VERTICES: u64 = 1_000_000;

/// Candidate rule `W(u, t)` of a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkRule {
    /// Move to a uniformly random neighbor. On `B^m` this flips one uniformly
    /// random bit.
    Neighbor,
    /// At step `t` move along axis `(t - 1) mod D`, to `x_i - 1` or `x_i + 1`
    /// clamped to the axis range (so a boundary vertex may stay put).
    CoordinateCycling,
}

/// A regular walk rule together with its start vertex `v0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSpec {
    pub rule: WalkRule,
    pub start: Vertex,
}

impl WalkSpec {
    pub fn new(rule: WalkRule, start: Vertex) -> Self {
        WalkSpec { rule, start }
    }

    /// Checks the start vertex and that `|W(u, t)|` does not depend on `u`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        g.validate(&self.start)?;
        if self.rule == WalkRule::Neighbor && g.axes().iter().any(|&k| k > 2) {
            return input(format!(
                "neighbor walk on {g} is not regular; use coordinate-cycling"
            ));
        }
        Ok(())
    }

    /// Writes `W(u, t)` (ascending ids, no duplicates) into `out`.
    pub fn candidates_into(&self, g: &Graph, u: VertexId, t: usize, out: &mut Vec<VertexId>) {
        match self.rule {
            WalkRule::Neighbor => g.neighbor_ids_into(u, out),
            WalkRule::CoordinateCycling => {
                out.clear();
                let axis = (t - 1) % g.dim();
                let stride: u64 = g.axes()[..axis].iter().map(|&k| k as u64).product();
                let c = g.coord(u, axis);
                let lo = if c > 1 { u - stride } else { u };
                let hi = if c < g.axes()[axis] { u + stride } else { u };
                out.push(lo);
                if hi != lo {
                    out.push(hi);
                }
            }
        }
    }

    pub fn candidates(&self, g: &Graph, u: VertexId, t: usize) -> Vec<VertexId> {
        let mut out = Vec::new();
        self.candidates_into(g, u, t, &mut out);
        out
    }
}

/// Walk and clock parameters for the Boolean hypercube `B^n = B^m x B^(n-m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypercubeDecomposition {
    pub n: u32,
    pub m: u32,
    pub gw: Graph,
    pub gc: Graph,
    /// Length of the clock's Hamilton path, `2^(n-m) - 1`.
    pub clock_len: u64,
    /// Number of walk steps, `floor(clock_len / 2)`.
    pub t_len: usize,
}

/// Which lower bound the decomposition is tuned for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Randomized,
    Quantum,
}

impl std::str::FromStr for BoundMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "randomized" | "r" => Ok(BoundMode::Randomized),
            "quantum" | "q" => Ok(BoundMode::Quantum),
            _ => input(format!("unknown mode {s:?}")),
        }
    }
}

/// `m = floor((n + log2 n) / 2)` for the randomized bound and
/// `m = floor((2n + log2 n) / 3)` for the quantum bound.
pub fn hypercube_decomposition(n: u32, mode: BoundMode) -> Result<HypercubeDecomposition> {
    if n < 4 {
        return input(format!("hypercube decomposition needs n >= 4, got {n}"));
    }
    let lg = (n as f64).log2();
    let m = match mode {
        BoundMode::Randomized => ((n as f64 + lg) / 2.0).floor(),
        BoundMode::Quantum => ((2.0 * n as f64 + lg) / 3.0).floor(),
    } as u32;
    if m == 0 || m >= n {
        return input(format!("n = {n} leaves no clock dimension (m = {m})"));
    }
    let clock_len = (1u64 << (n - m)) - 1;
    Ok(HypercubeDecomposition {
        n,
        m,
        gw: GraphFamily::boolean(m).build()?,
        gc: GraphFamily::boolean(n - m).build()?,
        clock_len,
        t_len: (clock_len / 2) as usize,
    })
}

/// The public part of a clocked-path problem: everything except which walk
/// was drawn.
#[derive(Clone, Debug)]
pub struct ClockedFrame {
    pub gw: Graph,
    pub gc: Graph,
    pub product: Graph,
    pub spec: WalkSpec,
    pub t_len: usize,
    /// `z_{0,0}, z_{1,0}, z_{1,1}, ..., z_{T,T}`: `clock[2k] = z_{k,k}` and
    /// `clock[2k+1] = z_{k+1,k}`.
    pub clock: Vec<VertexId>,
    clock_pos: HashMap<VertexId, usize>,
    start_w: VertexId,
}

impl ClockedFrame {
    pub fn new(gw: Graph, gc: Graph, spec: WalkSpec, t_len: usize) -> Result<Self> {
        spec.validate(&gw)?;
        let max_t = (gc.order() - 1) / 2;
        if t_len as u64 > max_t {
            return input(format!(
                "T = {t_len} exceeds floor(L/2) = {max_t} for clock {gc}"
            ));
        }
        let clock: Vec<VertexId> = (0..=2 * t_len as u64)
            .map(|r| gc.hamilton_unrank(r).map(|v| gc.id_unchecked(v.coords())))
            .collect::<Result<_>>()?;
        let clock_pos = clock.iter().enumerate().map(|(i, &z)| (z, i)).collect();
        let product = GraphFamily::product(gw.family().clone(), gc.family().clone()).build()?;
        let start_w = gw.id(&spec.start)?;
        Ok(ClockedFrame {
            gw,
            gc,
            product,
            spec,
            t_len,
            clock,
            clock_pos,
            start_w,
        })
    }

    /// Product id of `w ⊗ z`.
    pub fn join(&self, w: VertexId, z: VertexId) -> VertexId {
        w + z * self.gw.order()
    }

    /// Splits a product id into `(w, z)`.
    pub fn split(&self, v: VertexId) -> (VertexId, VertexId) {
        (v % self.gw.order(), v / self.gw.order())
    }

    /// `x_0 ⊗ z_{0,0}`.
    pub fn start(&self) -> VertexId {
        self.join(self.start_w, self.clock[0])
    }

    pub fn clock_position(&self, z: VertexId) -> Option<usize> {
        self.clock_pos.get(&z).copied()
    }

    fn off_path_value(&self, v: VertexId) -> i64 {
        (self.product.distance_ids(v, self.start()) + 3 * self.t_len as u64) as i64
    }
}

/// A clocked walk `x_0, ..., x_T` in `Gw` and its path `X` in `Gw x Gc`.
#[derive(Clone, Debug)]
pub struct PathInstance {
    frame: ClockedFrame,
    pub seed: u64,
    walk: Vec<VertexId>,
    members: HashSet<VertexId>,
}

impl PathInstance {
    /// Draws a walk of `t_len` steps with every step uniform over
    /// `W(x_{t-1}, t)`.
    pub fn generate(gw: Graph, gc: Graph, spec: WalkSpec, t_len: usize, seed: u64) -> Result<Self> {
        let frame = ClockedFrame::new(gw, gc, spec, t_len)?;
        let mut rng = seeded(seed);
        let mut walk = Vec::with_capacity(t_len + 1);
        walk.push(frame.start_w);
        let mut cand = Vec::new();
        for t in 1..=t_len {
            frame
                .spec
                .candidates_into(&frame.gw, walk[t - 1], t, &mut cand);
            walk.push(cand[rng.random_range(0..cand.len())]);
        }
        Ok(Self::assemble(frame, walk, seed))
    }

    /// Rebuilds an instance from an explicit walk, checking that every step is
    /// an allowed move.
    pub fn from_walk(
        gw: Graph,
        gc: Graph,
        spec: WalkSpec,
        walk: Vec<Vertex>,
        seed: u64,
    ) -> Result<Self> {
        if walk.is_empty() {
            return Err(Error::Invariant("walk must contain x_0".into()));
        }
        let t_len = walk.len() - 1;
        let frame = ClockedFrame::new(gw, gc, spec, t_len)?;
        let ids = walk
            .iter()
            .map(|v| frame.gw.id(v))
            .collect::<Result<Vec<_>>>()?;
        if ids[0] != frame.start_w {
            return Err(Error::Invariant(format!(
                "walk starts at {:?}, spec says {:?}",
                walk[0], frame.spec.start
            )));
        }
        let mut cand = Vec::new();
        for t in 1..ids.len() {
            frame
                .spec
                .candidates_into(&frame.gw, ids[t - 1], t, &mut cand);
            if !cand.contains(&ids[t]) {
                return Err(Error::Invariant(format!(
                    "step {t} from {:?} to {:?} is not in W(x, t)",
                    walk[t - 1],
                    walk[t]
                )));
            }
        }
        Ok(Self::assemble(frame, ids, seed))
    }

    fn assemble(frame: ClockedFrame, walk: Vec<VertexId>, seed: u64) -> Self {
        let mut inst = PathInstance {
            frame,
            seed,
            walk,
            members: HashSet::new(),
        };
        inst.members = inst.path().into_iter().collect();
        inst
    }

    pub fn frame(&self) -> &ClockedFrame {
        &self.frame
    }

    pub fn product(&self) -> &Graph {
        &self.frame.product
    }

    pub fn t_len(&self) -> usize {
        self.frame.t_len
    }

    /// Walk vertices `x_0..=x_T` as ids of `Gw`.
    pub fn walk(&self) -> &[VertexId] {
        &self.walk
    }

    pub fn walk_vertices(&self) -> Vec<Vertex> {
        self.walk.iter().map(|&w| self.frame.gw.vertex(w)).collect()
    }

    /// `X = (x_0⊗z_00, x_1⊗z_00, x_1⊗z_10, x_1⊗z_11, x_2⊗z_11, ...)`, with
    /// `3T + 1` entries; consecutive entries coincide where the walk stayed.
    pub fn path(&self) -> Vec<VertexId> {
        let f = &self.frame;
        let mut out = Vec::with_capacity(3 * f.t_len + 1);
        out.push(f.join(self.walk[0], f.clock[0]));
        for k in 1..=f.t_len {
            out.push(f.join(self.walk[k], f.clock[2 * k - 2]));
            out.push(f.join(self.walk[k], f.clock[2 * k - 1]));
            out.push(f.join(self.walk[k], f.clock[2 * k]));
        }
        out
    }

    /// `x_T ⊗ z_{T,T}`.
    pub fn end(&self) -> VertexId {
        self.frame.join(
            self.walk[self.frame.t_len],
            self.frame.clock[2 * self.frame.t_len],
        )
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }

    /// `f_X(v)`: `|v - x_0⊗z_00| + 3T` off the path, and `3(T-k)`,
    /// `3(T-k) - 1`, `3(T-k) - 2` at `x_k⊗z_kk`, `x_{k+1}⊗z_kk` and
    /// `x_{k+1}⊗z_{k+1,k}` respectively.
    pub fn eval_fx(&self, v: VertexId) -> i64 {
        let f = &self.frame;
        let t = f.t_len as i64;
        if !self.members.contains(&v) {
            return f.off_path_value(v);
        }
        let (w, z) = f.split(v);
        let p = f.clock_pos[&z];
        let k = (p / 2) as i64;
        if p % 2 == 1 {
            3 * (t - k) - 2
        } else if w == self.walk[k as usize] {
            3 * (t - k)
        } else {
            3 * (t - k) - 1
        }
    }

    /// Computes `f_X(v)` through membership questions only, asking at most
    /// two. Only public data of the frame is used besides the oracle.
    pub fn reduce_query<M: Membership + ?Sized>(
        frame: &ClockedFrame,
        v: VertexId,
        oracle: &mut CountingOracle<'_, M>,
    ) -> i64 {
        let t = frame.t_len as i64;
        if !oracle.query_membership(v) {
            return frame.off_path_value(v);
        }
        let (w, z) = frame.split(v);
        let p = frame
            .clock_position(z)
            .expect("a path vertex always sits on the clock");
        let k = (p / 2) as i64;
        if p % 2 == 1 {
            return 3 * (t - k) - 2;
        }
        if k == 0 {
            return if w == frame.start_w { 3 * t } else { 3 * t - 1 };
        }
        let probe = frame.join(w, frame.clock[p - 1]);
        if oracle.query_membership(probe) {
            3 * (t - k)
        } else {
            3 * (t - k) - 1
        }
    }

    pub fn verify_unique_local_min(&self) -> Result<UniquenessReport> {
        verify_unique_local_min(self.product(), |v| self.eval_fx(v), self.end())
    }

    pub fn to_file(&self) -> PathInstanceFile {
        PathInstanceFile {
            gw: self.frame.gw.clone(),
            gc: self.frame.gc.clone(),
            walk_spec: self.frame.spec.clone(),
            t_len: self.frame.t_len,
            seed: self.seed,
            walk: self.walk_vertices(),
        }
    }

    pub fn from_file(file: PathInstanceFile) -> Result<Self> {
        let inst = Self::from_walk(file.gw, file.gc, file.walk_spec, file.walk, file.seed)?;
        if inst.t_len() != file.t_len {
            return Err(Error::Invariant(format!(
                "T = {} but walk has {} steps",
                file.t_len,
                inst.t_len()
            )));
        }
        Ok(inst)
    }
}

impl Objective for PathInstance {
    fn value(&self, v: VertexId) -> i64 {
        self.eval_fx(v)
    }
}

impl Membership for PathInstance {
    fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }
}

/// Portable form of a [`PathInstance`]; the walk is stored explicitly so the
/// file does not depend on RNG reproduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathInstanceFile {
    pub gw: Graph,
    pub gc: Graph,
    pub walk_spec: WalkSpec,
    #[serde(rename = "T")]
    pub t_len: usize,
    pub seed: u64,
    pub walk: Vec<Vertex>,
}

/// Outcome of an exhaustive local-minimum scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub unique: bool,
    /// Local minima found (at most 16 are kept).
    pub local_minima: Vec<Vertex>,
    /// A vertex contradicting uniqueness, if any.
    pub witness: Option<Vertex>,
}

/// Checks every vertex of `g` and reports whether `expected` is the only
/// local minimum of `f`.
pub fn verify_unique_local_min(
    g: &Graph,
    f: impl Fn(VertexId) -> i64,
    expected: VertexId,
) -> Result<UniquenessReport> {
    if g.order() > MAX_VERIFY_VERTICES {
        return Err(Error::Budget {
            what: "exhaustive local-minimum scan",
            needed: g.order() as u128,
            limit: MAX_VERIFY_VERTICES as u128,
        });
    }
    let table: Vec<i64> = g.vertex_ids().map(&f).collect();
    let mut minima = Vec::new();
    let mut count = 0usize;
    let mut witness = None;
    for v in g.vertex_ids() {
        if g.is_local_min(v, |w| table[w as usize]) {
            count += 1;
            if minima.len() < 16 {
                minima.push(g.vertex(v));
            }
            if v != expected && witness.is_none() {
                witness = Some(g.vertex(v));
            }
        }
    }
    let expected_is_min = g.is_local_min(expected, |w| table[w as usize]);
    if !expected_is_min && witness.is_none() {
        witness = Some(g.vertex(expected));
    }
    Ok(UniquenessReport {
        unique: count == 1 && expected_is_min,
        local_minima: minima,
        witness,
    })
}
