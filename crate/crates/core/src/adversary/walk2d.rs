//! The improved two-dimensional walk: `[n]^2` is cut into
//! `n^(4/5) x n^(4/5)` blocks visited in serpentine order, one block per
//! step, with long straight moves between them.
//!
//! Offsets `x''`, `y''` are drawn uniformly from the block side `[n^(4/5)]`.

use std::collections::HashMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{verify_unique_local_min, UniquenessReport};
use crate::error::{input, Error, Result};
use crate::graph::{Graph, GraphFamily, Vertex, VertexId};
use crate::rng::seeded;

/// Exact fifth root of `n`, if any.
fn fifth_root(n: u64) -> Option<u64> {
    let a = (n as f64).powf(0.2).round() as u64;
    (a.saturating_sub(1)..=a + 1).find(|&b| b.checked_pow(5) == Some(n))
}

/// Smallest `n >= requested` with `n = a^5` and `a ≡ 3 (mod 4)`.
pub fn nearest_valid_2d_n(requested: u64) -> u64 {
    let mut a = 3u64;
    while a.pow(5) < requested {
        a += 4;
    }
    a.pow(5)
}

/// One step of the walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step2d {
    pub t: usize,
    pub horizontal: bool,
    /// Drawn offset (`x''` for horizontal steps, `y''` for vertical ones).
    pub draw: u32,
}

/// Trajectory of the improved 2-D walk.
#[derive(Clone, Debug)]
pub struct TwoDWalkInstance {
    pub n: u32,
    pub seed: u64,
    a: u32,
    s: u32,
    graph: Graph,
    steps: Vec<Step2d>,
    path: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    /// Block coordinates `(bx, by)` (0-based) to step `t`.
    block_step: HashMap<(u32, u32), usize>,
    /// Per step `t` (index `t - 1`): travel direction along x and y.
    dirs: Vec<(i8, i8)>,
}

impl TwoDWalkInstance {
    fn check_n(n: u64) -> Result<u32> {
        match fifth_root(n) {
            Some(a) if a % 4 == 3 && n <= u32::MAX as u64 => Ok(a as u32),
            _ => input(format!(
                "n = {n} needs n^(1/5) integral and ≡ 3 mod 4; nearest valid n is {}",
                nearest_valid_2d_n(n)
            )),
        }
    }

    /// `(r, t')` with `t = 2 r a + t'`, `t'` in `1..=2a`.
    fn split_t(&self, t: usize) -> (u32, u32) {
        let per = 2 * self.a as usize;
        (((t - 1) / per) as u32, ((t - 1) % per + 1) as u32)
    }

    /// Lower-left corner (0-based) of `block(t)`.
    fn block_origin(&self, t: usize) -> (u32, u32) {
        let (r, tp) = self.split_t(t);
        let col = tp.div_ceil(2);
        let u = if matches!(tp % 4, 0 | 1) { 0 } else { self.s };
        let x0 = if r % 2 == 0 {
            (col - 1) * self.s
        } else {
            (self.a - col) * self.s
        };
        (x0, 2 * r * self.s + u)
    }

    pub fn steps_total(&self) -> usize {
        (self.a * (self.a - 1)) as usize
    }

    fn id(&self, x: u32, y: u32) -> VertexId {
        self.graph.id_unchecked(&[x, y])
    }

    fn build(n: u32, seed: u64, draws: Option<&[Step2d]>) -> Result<Self> {
        let a = Self::check_n(n as u64)?;
        let s = a.pow(4);
        let graph = GraphFamily::grid(n, 2).build()?;
        let mut inst = TwoDWalkInstance {
            n,
            seed,
            a,
            s,
            graph,
            steps: Vec::new(),
            path: Vec::new(),
            index: HashMap::new(),
            block_step: HashMap::new(),
            dirs: Vec::new(),
        };
        let total = inst.steps_total();
        for t in 1..=total {
            let (x0, y0) = inst.block_origin(t);
            inst.block_step.insert((x0 / s, y0 / s), t);
        }
        if let Some(d) = draws {
            if d.len() != total {
                return Err(Error::Invariant(format!(
                    "2-D walk needs {total} steps, got {}",
                    d.len()
                )));
            }
        }
        let mut rng = seeded(seed);
        let (mut x, mut y) = (1u32, 1u32);
        inst.push(x, y)?;
        for t in 1..=total {
            let (_, tp) = inst.split_t(t);
            let horizontal = tp % 2 == 1;
            let draw = match draws {
                Some(d) => {
                    let st = d[t - 1];
                    if st.t != t || st.horizontal != horizontal || !(1..=s).contains(&st.draw) {
                        return Err(Error::Invariant(format!("step {t} is malformed")));
                    }
                    d[t - 1].draw
                }
                None => rng.random_range(1..=s),
            };
            inst.steps.push(Step2d {
                t,
                horizontal,
                draw,
            });
            if horizontal {
                let (x0, _) = inst.block_origin(t);
                let tx = x0 + draw;
                while x != tx {
                    x = if tx > x { x + 1 } else { x - 1 };
                    inst.push(x, y)?;
                }
            } else {
                // The last vertical move of a strip lands in the next strip;
                // the final one has nowhere further to go.
                let target_t = if tp == 2 * a && t < total { t + 1 } else { t };
                let (_, y0) = inst.block_origin(target_t);
                let ty = y0 + draw;
                while y != ty {
                    y = if ty > y { y + 1 } else { y - 1 };
                    inst.push(x, y)?;
                }
            }
        }
        inst.dirs = inst.travel_directions()?;
        Ok(inst)
    }

    fn push(&mut self, x: u32, y: u32) -> Result<()> {
        let id = self.id(x, y);
        if self.index.insert(id, self.path.len()).is_some() {
            return Err(Error::Invariant(format!("2-D walk revisits ({x}, {y})")));
        }
        self.path.push(id);
        Ok(())
    }

    /// Step `t` whose block contains `(x, y)`, if any.
    fn step_of(&self, x: u32, y: u32) -> Option<usize> {
        self.block_step
            .get(&((x - 1) / self.s, (y - 1) / self.s))
            .copied()
    }

    /// Direction of travel inside each block. The path crosses a block in
    /// at most one horizontal and one vertical direction; a block without
    /// movement along an axis keeps the serpentine default.
    fn travel_directions(&self) -> Result<Vec<(i8, i8)>> {
        let mut dirs: Vec<(Option<i8>, Option<i8>)> = vec![(None, None); self.steps_total()];
        for w in self.path.windows(2) {
            let p = self.graph.vertex(w[0]);
            let q = self.graph.vertex(w[1]);
            let (t0, t1) = (self.step_of(p.0[0], p.0[1]), self.step_of(q.0[0], q.0[1]));
            if t0.is_none() || t0 != t1 {
                continue;
            }
            let slot = &mut dirs[t0.unwrap() - 1];
            let (dx, dy) = (q.0[0] as i64 - p.0[0] as i64, q.0[1] as i64 - p.0[1] as i64);
            let (cell, delta) = if dx != 0 {
                (&mut slot.0, dx)
            } else {
                (&mut slot.1, dy)
            };
            let sign = delta.signum() as i8;
            match *cell {
                Some(prev) if prev != sign => {
                    return Err(Error::Invariant(format!(
                        "path reverses inside block {}",
                        t0.unwrap()
                    )))
                }
                _ => *cell = Some(sign),
            }
        }
        Ok(dirs
            .into_iter()
            .enumerate()
            .map(|(i, (h, v))| {
                let (r, tp) = self.split_t(i + 1);
                let h0 = if r % 2 == 0 { 1 } else { -1 };
                let v0 = if tp.div_ceil(2) % 2 == 1 { 1 } else { -1 };
                (h.unwrap_or(h0), v.unwrap_or(v0))
            })
            .collect())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex(&self, v: VertexId) -> Vertex {
        self.graph.vertex(v)
    }

    /// Block side `n^(4/5)`.
    pub fn block_side(&self) -> u32 {
        self.s
    }

    pub fn steps(&self) -> &[Step2d] {
        &self.steps
    }

    /// Every vertex visited, in order, starting at `(1, 1)`.
    pub fn path(&self) -> &[VertexId] {
        &self.path
    }

    pub fn end(&self) -> VertexId {
        *self.path.last().expect("path is nonempty")
    }

    /// Corner `(x0, y0)` of `block(t)`; a vertex is `(x0 + x', y0 + y')`.
    pub fn block(&self, t: usize) -> (u32, u32) {
        self.block_origin(t)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    /// `|v - (1,1)|` off the path. On the path inside `block(t)` with offset
    /// `(x', y')`: `-2s(t-1) - ρ_h(x') - ρ_v(y')`, where `s = n^(4/5)`,
    /// `ρ_{+1}(z) = z`, `ρ_{-1}(z) = s + 1 - z`, and `h`, `v` are the
    /// directions the path travels inside that block.
    pub fn eval_fx_2d(&self, v: VertexId) -> i64 {
        let c = self.graph.vertex(v);
        let (x, y) = (c.0[0], c.0[1]);
        if !self.index.contains_key(&v) {
            return (x - 1) as i64 + (y - 1) as i64;
        }
        let t = self.step_of(x, y).expect("path stays inside the blocks");
        let (x0, y0) = self.block_origin(t);
        let (h, vd) = self.dirs[t - 1];
        let s = self.s as i64;
        let rho = |dir: i8, z: i64| if dir > 0 { z } else { s + 1 - z };
        -2 * s * (t as i64 - 1) - rho(h, (x - x0) as i64) - rho(vd, (y - y0) as i64)
    }

    pub fn verify_unique_local_min(&self) -> Result<UniquenessReport> {
        verify_unique_local_min(&self.graph, |v| self.eval_fx_2d(v), self.end())
    }

    pub fn to_file(&self) -> TwoDInstanceFile {
        TwoDInstanceFile {
            n: self.n,
            seed: self.seed,
            steps: self.steps.clone(),
        }
    }

    pub fn from_file(file: TwoDInstanceFile) -> Result<Self> {
        Self::build(file.n, file.seed, Some(&file.steps))
    }
}

impl crate::oracle::Objective for TwoDWalkInstance {
    fn value(&self, v: VertexId) -> i64 {
        self.eval_fx_2d(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoDInstanceFile {
    pub n: u32,
    pub seed: u64,
    pub steps: Vec<Step2d>,
}

pub fn walk2d_improved(n: u64, seed: u64) -> Result<TwoDWalkInstance> {
    TwoDWalkInstance::check_n(n)?;
    TwoDWalkInstance::build(n as u32, seed, None)
}
