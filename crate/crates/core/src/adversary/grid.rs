//! Grid generators: the integer-dimension coordinate-cycling walk and the
//! block-threaded walk for fractional dimension splits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{verify_unique_local_min, PathInstance, UniquenessReport, WalkRule, WalkSpec};
use crate::error::{input, Error, Result};
use crate::graph::{Graph, GraphFamily, Vertex, VertexId};

/// A clocked coordinate-cycling walk on `[n]^d = [n]^m x [n]^(d-m)`.
///
/// The walk lives in the first `m` coordinates, steps along axis
/// `(t - 1) mod m` to a clamped `x_i - 1` or `x_i + 1`, and the remaining
/// `d - m` coordinates hold the Hamilton-path clock.
pub fn grid_walk_integer(n: u32, d: u32, m: u32, seed: u64) -> Result<PathInstance> {
    if m == 0 || m >= d {
        return input(format!("need 1 <= m <= d - 1, got m = {m}, d = {d}"));
    }
    let gw = GraphFamily::grid(n, m).build()?;
    let gc = GraphFamily::grid(n, d - m).build()?;
    let t_len = ((gc.order() - 1) / 2) as usize;
    let spec = WalkSpec::new(
        WalkRule::CoordinateCycling,
        Vertex::new(vec![1; m as usize]),
    );
    PathInstance::generate(gw, gc, spec, t_len, seed)
}

/// Parameters of a block-threaded walk on `[n]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockConfig {
    pub n: u32,
    pub d: u32,
    /// Exponent in `alpha = floor(n^r)`, `beta = floor(n^(1-r))`.
    pub r: f64,
}

/// `floor(n^e)`, snapping to the nearest integer when within rounding noise.
fn int_pow_floor(n: u32, e: f64) -> u32 {
    let x = (n as f64).powf(e);
    let near = x.round();
    if (x - near).abs() < 1e-9 {
        near as u32
    } else {
        x.floor() as u32
    }
}

impl BlockConfig {
    pub fn alpha(&self) -> u32 {
        int_pow_floor(self.n, self.r)
    }

    pub fn beta(&self) -> u32 {
        int_pow_floor(self.n, 1.0 - self.r)
    }

    pub fn n_prime(&self) -> u32 {
        self.alpha() * self.beta()
    }

    /// Clock positions per block, `n' - 2 alpha`.
    pub fn block_clock(&self) -> u64 {
        (self.n_prime() - 2 * self.alpha()) as u64
    }

    /// `L = (n' - 2 alpha) beta^(d-1)`.
    pub fn clock_len(&self) -> u64 {
        self.block_clock() * (self.beta() as u64).pow(self.d - 1)
    }

    /// Walk steps that fit on the threaded clock: each step ticks twice.
    pub fn t_len(&self) -> usize {
        ((self.clock_len() - 1) / 2) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 1.0) {
            return input(format!("r must lie in (0, 1), got {}", self.r));
        }
        if self.d < 2 {
            return input("block threading needs d >= 2");
        }
        let (a, b) = (self.alpha(), self.beta());
        if a < 2 || b < 3 {
            return input(format!(
                "n = {}, r = {} gives alpha = {a}, beta = {b}; need alpha >= 2 and beta >= 3",
                self.n, self.r
            ));
        }
        Ok(())
    }
}

/// A block-changing detour: the boundary point where the clock ran out in
/// one block followed by the vertices leading into the next block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSegment {
    /// Block-grid axis `j` that changes.
    pub axis: usize,
    /// `+1` or `-1`.
    pub sign: i8,
    /// Positions in [`BlockInstance::path`]; the first is the boundary point.
    pub positions: Vec<usize>,
}

/// Trajectory of the block-threaded walk and its induced function.
#[derive(Clone, Debug)]
pub struct BlockInstance {
    pub config: BlockConfig,
    graph: Graph,
    virt: PathInstance,
    path: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    /// Virtual clock position attributed to each physical path vertex.
    clock: Vec<usize>,
    /// Walk steps completed when each physical path vertex is reached.
    step: Vec<usize>,
    /// Physical position of each entry of the deduplicated virtual path.
    virtual_pos: Vec<usize>,
    segments: Vec<BlockSegment>,
}

struct Threading {
    alpha: u32,
    n_prime: u32,
    block_clock: u64,
    /// Block-grid coordinates of each block along `HamPath_{beta,d-1}`.
    blocks: Vec<Vec<u32>>,
    /// Per block, whether each axis has been reflected an odd number of times.
    reflected: Vec<Vec<bool>>,
}

impl Threading {
    fn new(cfg: &BlockConfig) -> Result<Self> {
        let ham = GraphFamily::grid(cfg.beta(), cfg.d - 1).build()?;
        let blocks: Vec<Vec<u32>> = ham.hamilton_path().map(|v| v.0).collect();
        let mut reflected = vec![vec![false; (cfg.d - 1) as usize]];
        for w in blocks.windows(2) {
            let j = changed_axis(&w[0], &w[1]);
            let mut next = reflected.last().unwrap().clone();
            next[j] = !next[j];
            reflected.push(next);
        }
        Ok(Threading {
            alpha: cfg.alpha(),
            n_prime: cfg.n_prime(),
            block_clock: cfg.block_clock(),
            blocks,
            reflected,
        })
    }

    /// Physical coordinates of virtual offsets `y` at threaded clock
    /// position `p` (0-based).
    fn place(&self, y: &[u32], p: u64) -> Vec<u32> {
        let b = (p / self.block_clock) as usize;
        let q = (p % self.block_clock) as u32;
        let a = self.alpha;
        let mut x: Vec<u32> = y
            .iter()
            .enumerate()
            .map(|(i, &yi)| {
                let off = if self.reflected[b][i] { a + 1 - yi } else { yi };
                (self.blocks[b][i] - 1) * a + off
            })
            .collect();
        x.push(if b.is_multiple_of(2) {
            a + 1 + q
        } else {
            self.n_prime - a - q
        });
        x
    }

    fn block_of(&self, p: u64) -> usize {
        (p / self.block_clock) as usize
    }
}

fn changed_axis(a: &[u32], b: &[u32]) -> usize {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .expect("consecutive blocks differ")
}

/// Runs the block-threaded walk.
///
/// Within a block the walk takes one clamped step in the block's
/// `[alpha]^(d-1)` offsets, then two clock ticks along the last axis (upward
/// in even-numbered blocks, downward in odd ones). When the clock reaches
/// the end of a block, a U-shaped detour through the margin
/// `x_{d-1} > n' - alpha` (or `<= alpha`) carries the particle into the next
/// block of `HamPath_{beta,d-1}`, reflecting the changed offset
/// `y_j -> alpha + 1 - y_j`. The detour takes no clock time.
pub fn block_threaded_walk(cfg: BlockConfig, seed: u64) -> Result<BlockInstance> {
    cfg.validate()?;
    let gw = GraphFamily::grid(cfg.alpha(), cfg.d - 1).build()?;
    let gc = GraphFamily::line(cfg.clock_len() as u32).build()?;
    let spec = WalkSpec::new(
        WalkRule::CoordinateCycling,
        Vertex::new(vec![1; (cfg.d - 1) as usize]),
    );
    let virt = PathInstance::generate(gw, gc, spec, cfg.t_len(), seed)?;
    BlockInstance::thread(cfg, virt)
}

impl BlockInstance {
    fn thread(config: BlockConfig, virt: PathInstance) -> Result<Self> {
        let th = Threading::new(&config)?;
        let graph = GraphFamily::grid(config.n, config.d).build()?;
        let frame = virt.frame();
        let vpath = virt.path();

        let mut inst = BlockInstance {
            config,
            graph,
            path: Vec::new(),
            index: HashMap::new(),
            clock: Vec::new(),
            step: Vec::new(),
            virtual_pos: Vec::new(),
            segments: Vec::new(),
            virt: virt.clone(),
        };
        let dim = config.d as usize;
        let mut prev: Option<(VertexId, u64)> = None;
        for (i, &v) in vpath.iter().enumerate() {
            if i > 0 && vpath[i - 1] == v {
                continue;
            }
            // Entry 3k is x_k at z_kk; entries 3k-2..=3k follow step k.
            let steps_done = i.div_ceil(3);
            let (w, z) = frame.split(v);
            let y = frame.gw.vertex(w).0;
            let x = th.place(&y, z);
            if let Some((pw, pz)) = prev {
                if th.block_of(pz) != th.block_of(z) {
                    let b = th.block_of(pz);
                    let j = changed_axis(&th.blocks[b], &th.blocks[b + 1]);
                    let sign: i64 = if th.blocks[b + 1][j] > th.blocks[b][j] {
                        1
                    } else {
                        -1
                    };
                    let py = frame.gw.vertex(pw).0;
                    let mut cur = th.place(&py, pz);
                    let a = th.alpha as i64;
                    let yj = cur[j] as i64 - (th.blocks[b][j] as i64 - 1) * a;
                    let h = if sign > 0 { a + 1 - yj } else { yj };
                    let up: i64 = if b % 2 == 0 { 1 } else { -1 };
                    let boundary = inst.path.len() - 1;
                    let mut positions = vec![boundary];
                    let moves = std::iter::repeat_n((dim - 1, up), h as usize)
                        .chain(std::iter::repeat_n((j, sign), (2 * h - 1) as usize))
                        .chain(std::iter::repeat_n((dim - 1, -up), h as usize - 1));
                    for (axis, delta) in moves {
                        cur[axis] = (cur[axis] as i64 + delta) as u32;
                        positions.push(inst.path.len());
                        inst.push(&cur, pz as usize, steps_done - 1)?;
                    }
                    cur[dim - 1] = (cur[dim - 1] as i64 - up) as u32;
                    if cur != x {
                        return Err(Error::Invariant(format!(
                            "detour from block {b} lands at {cur:?}, expected {x:?}"
                        )));
                    }
                    inst.segments.push(BlockSegment {
                        axis: j,
                        sign: sign as i8,
                        positions,
                    });
                }
            }
            inst.virtual_pos.push(inst.path.len());
            inst.push(&x, z as usize, steps_done)?;
            prev = Some((w, z));
        }
        Ok(inst)
    }

    fn push(&mut self, coords: &[u32], clock: usize, step: usize) -> Result<()> {
        let id = self.graph.id(&Vertex::new(coords.to_vec()))?;
        if let Some(&prev) = self.path.last() {
            if !self.graph.adjacent(prev, id) {
                return Err(Error::Invariant(format!("trajectory jumps to {coords:?}")));
            }
        }
        if self.index.insert(id, self.path.len()).is_some() {
            return Err(Error::Invariant(format!("trajectory revisits {coords:?}")));
        }
        self.path.push(id);
        self.clock.push(clock);
        self.step.push(step);
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The walk on the virtual product `[alpha]^(d-1) x [L]`.
    pub fn virtual_instance(&self) -> &PathInstance {
        &self.virt
    }

    /// Physical trajectory, self-avoiding, consecutive vertices adjacent.
    pub fn path(&self) -> &[VertexId] {
        &self.path
    }

    pub fn segments(&self) -> &[BlockSegment] {
        &self.segments
    }

    /// Threaded clock position attributed to path position `i`.
    pub fn clock_at(&self, i: usize) -> usize {
        self.clock[i]
    }

    /// Walk steps completed when path position `i` is reached.
    pub fn step_at(&self, i: usize) -> usize {
        self.step[i]
    }

    /// Physical path position of each vertex of the deduplicated virtual
    /// path, in order.
    pub fn virtual_positions(&self) -> &[usize] {
        &self.virtual_pos
    }

    pub fn end(&self) -> VertexId {
        *self.path.last().expect("trajectory is nonempty")
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    /// Remaining path length on the trajectory; distance to the start plus
    /// the trajectory length elsewhere.
    pub fn eval_fx(&self, v: VertexId) -> i64 {
        let len = self.path.len() as i64;
        match self.index.get(&v) {
            Some(&i) => len - 1 - i as i64,
            None => self.graph.distance_ids(v, self.path[0]) as i64 + len,
        }
    }

    /// Exhaustive check that the trajectory end is the only local minimum.
    pub fn verify_unique_local_min(&self) -> Result<UniquenessReport> {
        verify_unique_local_min(&self.graph, |v| self.eval_fx(v), self.end())
    }

    pub fn to_file(&self) -> BlockInstanceFile {
        BlockInstanceFile {
            config: self.config,
            seed: self.virt.seed,
            walk: self.virt.walk_vertices(),
        }
    }

    pub fn from_file(file: BlockInstanceFile) -> Result<Self> {
        let cfg = file.config;
        cfg.validate()?;
        if file.walk.len() != cfg.t_len() + 1 {
            return Err(Error::Invariant(format!(
                "block walk needs {} positions, file has {}",
                cfg.t_len() + 1,
                file.walk.len()
            )));
        }
        let gw = GraphFamily::grid(cfg.alpha(), cfg.d - 1).build()?;
        let gc = GraphFamily::line(cfg.clock_len() as u32).build()?;
        let spec = WalkSpec::new(
            WalkRule::CoordinateCycling,
            Vertex::new(vec![1; (cfg.d - 1) as usize]),
        );
        let virt = PathInstance::from_walk(gw, gc, spec, file.walk, file.seed)?;
        Self::thread(cfg, virt)
    }
}

impl crate::oracle::Objective for BlockInstance {
    fn value(&self, v: VertexId) -> i64 {
        self.eval_fx(v)
    }
}

impl crate::oracle::Membership for BlockInstance {
    fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockInstanceFile {
    pub config: BlockConfig,
    pub seed: u64,
    /// Offsets of the walk in `[alpha]^(d-1)`, one per step.
    pub walk: Vec<Vertex>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cfg(n: u32, d: u32) -> BlockConfig {
        BlockConfig { n, d, r: 0.5 }
    }

    #[test]
    fn integer_walk_clamps_at_boundary() {
        let inst = grid_walk_integer(16, 2, 1, 3).unwrap();
        let gw = &inst.frame().gw;
        for (t, pair) in inst.walk().windows(2).enumerate() {
            let cand = inst.frame().spec.candidates(gw, pair[0], t + 1);
            assert!(cand.contains(&pair[1]));
        }
        assert_eq!(inst.t_len(), 7);
        assert_eq!(inst.product().order(), 256);
        assert!(grid_walk_integer(16, 2, 2, 0).is_err());
        assert!(grid_walk_integer(16, 2, 0, 0).is_err());
    }

    #[test]
    fn integer_walk_is_reproducible_and_valid() {
        let a = grid_walk_integer(16, 2, 1, 9).unwrap();
        let b = grid_walk_integer(16, 2, 1, 9).unwrap();
        assert_eq!(a.walk(), b.walk());
        assert!(a.verify_unique_local_min().unwrap().unique);
    }

    #[test]
    fn block_parameters() {
        let c = cfg(81, 2);
        assert_eq!((c.alpha(), c.beta(), c.n_prime()), (9, 9, 81));
        assert_eq!(c.clock_len(), 567);
        assert_eq!(c.t_len(), 283);
        assert!(cfg(4, 2).validate().is_err());
        assert_eq!(
            BlockConfig {
                n: 64,
                d: 2,
                r: 1.0 / 3.0
            }
            .alpha(),
            4
        );
    }

    #[test]
    fn detours_are_disjoint_and_reflect() {
        let inst = block_threaded_walk(cfg(81, 2), 1).unwrap();
        assert_eq!(inst.segments().len(), 8);
        let mut seen = HashSet::new();
        for seg in inst.segments() {
            for &p in &seg.positions {
                assert!(seen.insert(inst.path()[p]));
                assert_eq!(inst.clock_at(p), inst.clock_at(seg.positions[0]));
            }
        }
        assert_eq!(inst.virtual_positions().len(), {
            let mut v = inst.virtual_instance().path();
            v.dedup();
            v.len()
        });
    }

    #[test]
    fn block_walk_three_dimensions() {
        let inst = block_threaded_walk(
            BlockConfig {
                n: 16,
                d: 3,
                r: 0.5,
            },
            5,
        )
        .unwrap();
        // 4 x 4 blocks threaded by 15 detours.
        assert_eq!(inst.segments().len(), 15);
        assert!(inst.verify_unique_local_min().unwrap().unique);
    }

    #[test]
    fn start_and_end() {
        let inst = block_threaded_walk(cfg(16, 2), 2).unwrap();
        assert_eq!(inst.graph().vertex(inst.path()[0]), Vertex::new([1, 5]));
        assert_eq!(inst.eval_fx(inst.end()), 0);
        assert!(inst.verify_unique_local_min().unwrap().unique);
    }

    #[test]
    fn file_round_trip() {
        let inst = block_threaded_walk(cfg(16, 2), 8).unwrap();
        let json = serde_json::to_string(&inst.to_file()).unwrap();
        let back = BlockInstance::from_file(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.path(), inst.path());
    }
}
