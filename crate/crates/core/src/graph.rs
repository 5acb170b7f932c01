//! Implicit graph families: lines, `(k, l)`-hypercubes, grids and their
//! products.
//!
//! Every family handled here is a box `[k_0] x [k_1] x ... x [k_{D-1}]` whose
//! edges change a single coordinate by one. The product of two such boxes
//! under the "one factor moves" edge set is again such a box, so one mixed-radix
//! representation serves all of them. Coordinates are 1-based. Vertices are
//! never stored; neighbors, balls and spheres are computed on demand.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// Dense index of a vertex in the canonical (mixed-radix, first coordinate
/// fastest) order of its graph.
pub type VertexId = u64;

/// A vertex given by its 1-based coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub Vec<u32>);

impl Vertex {
    pub fn new(coords: impl Into<Vec<u32>>) -> Self {
        Vertex(coords.into())
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Builds a Boolean-hypercube vertex from a 0/1 string such as `"0110"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(1),
                '1' => Ok(2),
                other => input(format!("not a bit: {other:?}")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Vertex)
    }

    /// 0/1 view of a vertex of `hypercube(2, n)`.
    pub fn to_bits(&self) -> String {
        self.0
            .iter()
            .map(|&c| if c == 1 { '0' } else { '1' })
            .collect()
    }

    /// Concatenates the coordinates of two factor vertices.
    pub fn join(&self, other: &Vertex) -> Vertex {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Vertex(c)
    }

    /// Splits a product vertex after the first `left_dim` coordinates.
    pub fn split(&self, left_dim: usize) -> (Vertex, Vertex) {
        let (a, b) = self.0.split_at(left_dim);
        (Vertex(a.to_vec()), Vertex(b.to_vec()))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for Vertex {
    fn from(v: Vec<u32>) -> Self {
        Vertex(v)
    }
}

/// Serializable description of a graph family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphFamily {
    Line {
        n: u32,
    },
    Hypercube {
        k: u32,
        l: u32,
    },
    Grid {
        n: u32,
        d: u32,
    },
    Product {
        left: Box<GraphFamily>,
        right: Box<GraphFamily>,
    },
}

impl GraphFamily {
    pub fn line(n: u32) -> Self {
        GraphFamily::Line { n }
    }

    pub fn hypercube(k: u32, l: u32) -> Self {
        GraphFamily::Hypercube { k, l }
    }

    /// The Boolean hypercube `B^n`, i.e. `hypercube(2, n)`.
    pub fn boolean(n: u32) -> Self {
        GraphFamily::Hypercube { k: 2, l: n }
    }

    pub fn grid(n: u32, d: u32) -> Self {
        GraphFamily::Grid { n, d }
    }

    pub fn product(left: GraphFamily, right: GraphFamily) -> Self {
        GraphFamily::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn axes(&self) -> Vec<u32> {
        match self {
            GraphFamily::Line { n } => vec![*n],
            GraphFamily::Hypercube { k, l } => vec![*k; *l as usize],
            GraphFamily::Grid { n, d } => vec![*n; *d as usize],
            GraphFamily::Product { left, right } => {
                let mut a = left.axes();
                a.extend(right.axes());
                a
            }
        }
    }

    pub fn build(&self) -> Result<Graph> {
        Graph::new(self.clone())
    }
}

/// Parses `line:n=5`, `grid:n=64,d=2`, `hypercube:k=3,l=4`, `boolean:n=10`,
/// and products joined with `*` (`line:n=2*grid:n=3,d=2`).
impl std::str::FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('*').map(parse_factor);
        let first = parts
            .next()
            .ok_or_else(|| Error::Input("empty graph spec".into()))??;
        parts.try_fold(first, |acc, f| Ok(GraphFamily::product(acc, f?)))
    }
}

fn parse_factor(s: &str) -> Result<GraphFamily> {
    let s = s.trim();
    let (kind, args) = s.split_once(':').unwrap_or((s, ""));
    let mut n = None;
    let mut d = None;
    let mut k = None;
    let mut l = None;
    for kv in args.split(',').filter(|a| !a.is_empty()) {
        let (key, val) = kv
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("expected key=value, got {kv:?}")))?;
        let val: u32 = val
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad number in {kv:?}")))?;
        let slot = match key.trim() {
            "n" => &mut n,
            "d" => &mut d,
            "k" => &mut k,
            "l" => &mut l,
            other => return input(format!("unknown graph parameter {other:?}")),
        };
        *slot = Some(val);
    }
    let need = |x: Option<u32>, name: &str| {
        x.ok_or_else(|| Error::Input(format!("{kind} needs {name}=...")))
    };
    Ok(match kind {
        "line" => GraphFamily::line(need(n, "n")?),
        "grid" => GraphFamily::grid(need(n, "n")?, need(d, "d")?),
        "hypercube" => GraphFamily::hypercube(need(k, "k")?, need(l, "l")?),
        "boolean" => GraphFamily::boolean(need(n, "n")?),
        other => return input(format!("unknown graph kind {other:?}")),
    })
}

/// A graph family together with its precomputed mixed-radix layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFamily", into = "GraphFamily")]
pub struct Graph {
    family: GraphFamily,
    axes: Vec<u32>,
    strides: Vec<u64>,
    order: u64,
}

impl TryFrom<GraphFamily> for Graph {
    type Error = Error;
    fn try_from(f: GraphFamily) -> Result<Self> {
        Graph::new(f)
    }
}

impl From<Graph> for GraphFamily {
    fn from(g: Graph) -> Self {
        g.family
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(g: &GraphFamily, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match g {
                GraphFamily::Line { n } => write!(f, "line({n})"),
                GraphFamily::Hypercube { k, l } => write!(f, "hypercube({k},{l})"),
                GraphFamily::Grid { n, d } => write!(f, "grid({n},{d})"),
                GraphFamily::Product { left, right } => {
                    write!(f, "product(")?;
                    go(left, f)?;
                    write!(f, ",")?;
                    go(right, f)?;
                    write!(f, ")")
                }
            }
        }
        go(&self.family, f)
    }
}

impl Graph {
    pub fn new(family: GraphFamily) -> Result<Self> {
        let axes = family.axes();
        if axes.is_empty() {
            return input("graph must have at least one coordinate");
        }
        if let Some(&k) = axes.iter().find(|&&k| k == 0) {
            return input(format!("axis size {k} must be positive"));
        }
        let mut strides = Vec::with_capacity(axes.len());
        let mut order: u64 = 1;
        for &k in &axes {
            strides.push(order);
            order = order
                .checked_mul(k as u64)
                .ok_or_else(|| Error::Input("graph has more than 2^64 vertices".into()))?;
        }
        Ok(Graph {
            family,
            axes,
            strides,
            order,
        })
    }

    pub fn family(&self) -> &GraphFamily {
        &self.family
    }

    /// Per-coordinate axis sizes.
    pub fn axes(&self) -> &[u32] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of vertices `N`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Maximum degree `delta`.
    pub fn max_degree(&self) -> usize {
        self.axes
            .iter()
            .map(|&k| match k {
                1 => 0,
                2 => 1,
                _ => 2,
            })
            .sum()
    }

    /// Diameter `d` (largest shortest-path distance).
    pub fn diameter(&self) -> u64 {
        self.axes.iter().map(|&k| (k - 1) as u64).sum()
    }

    pub fn validate(&self, v: &Vertex) -> Result<()> {
        if v.dim() != self.dim() {
            return input(format!(
                "vertex {v:?} has {} coordinates, {} expects {}",
                v.dim(),
                self,
                self.dim()
            ));
        }
        for (i, (&c, &k)) in v.coords().iter().zip(&self.axes).enumerate() {
            if c < 1 || c > k {
                return input(format!("coordinate {i} of {v:?} outside [1, {k}]"));
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.validate(v).is_ok()
    }

    pub fn id(&self, v: &Vertex) -> Result<VertexId> {
        self.validate(v)?;
        Ok(self.id_unchecked(v.coords()))
    }

    pub(crate) fn id_unchecked(&self, coords: &[u32]) -> VertexId {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c as u64 - 1) * s)
            .sum()
    }

    pub fn vertex(&self, id: VertexId) -> Vertex {
        debug_assert!(id < self.order);
        Vertex(
            self.axes
                .iter()
                .zip(&self.strides)
                .map(|(&k, &s)| ((id / s) % k as u64) as u32 + 1)
                .collect(),
        )
    }

    /// Coordinate `axis` (1-based value) of vertex `id`.
    #[inline]
    pub fn coord(&self, id: VertexId, axis: usize) -> u32 {
        ((id / self.strides[axis]) % self.axes[axis] as u64) as u32 + 1
    }

    /// The vertex in the middle of every axis, where balls are largest.
    pub fn center(&self) -> Vertex {
        Vertex(self.axes.iter().map(|&k| k.div_ceil(2)).collect())
    }

    /// Neighbor ids of `id`, ascending.
    pub fn neighbor_ids_into(&self, id: VertexId, out: &mut Vec<VertexId>) {
        out.clear();
        // Descending axes for the minus moves, ascending for the plus moves,
        // gives ascending ids.
        for axis in (0..self.dim()).rev() {
            if self.coord(id, axis) > 1 {
                out.push(id - self.strides[axis]);
            }
        }
        for axis in 0..self.dim() {
            if self.coord(id, axis) < self.axes[axis] {
                out.push(id + self.strides[axis]);
            }
        }
    }

    pub fn neighbor_ids(&self, id: VertexId) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(2 * self.dim());
        self.neighbor_ids_into(id, &mut out);
        out
    }

    /// Adjacent vertices of `v`, in canonical order.
    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        let id = self.id(v)?;
        Ok(self
            .neighbor_ids(id)
            .into_iter()
            .map(|n| self.vertex(n))
            .collect())
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.distance_ids(u, v) == 1
    }

    /// Shortest-path distance; the sum of per-coordinate distances.
    pub fn distance(&self, u: &Vertex, v: &Vertex) -> Result<u64> {
        self.validate(u)?;
        self.validate(v)?;
        Ok(l1(u.coords(), v.coords()))
    }

    pub fn distance_ids(&self, u: VertexId, v: VertexId) -> u64 {
        (0..self.dim())
            .map(|a| self.coord(u, a).abs_diff(self.coord(v, a)) as u64)
            .sum()
    }

    /// Breadth-first search from `src`, stopping after layer `radius`.
    /// Returns the layers `0..=radius` (each sorted ascending).
    fn bfs_layers(&self, src: VertexId, radius: u64) -> Vec<Vec<VertexId>> {
        let mut seen = HashSet::new();
        seen.insert(src);
        let mut layers = vec![vec![src]];
        let mut queue = VecDeque::new();
        let mut buf = Vec::new();
        for depth in 0..radius {
            queue.extend(layers[depth as usize].iter().copied());
            let mut next = Vec::new();
            while let Some(u) = queue.pop_front() {
                self.neighbor_ids_into(u, &mut buf);
                for &w in &buf {
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            layers.push(next);
        }
        layers
    }

    /// `{u : |u - v| <= k}`.
    pub fn ball(&self, v: &Vertex, k: u64) -> Result<VertexSet> {
        let id = self.id(v)?;
        let mut ids: Vec<_> = self.bfs_layers(id, k).into_iter().flatten().collect();
        ids.sort_unstable();
        Ok(VertexSet::from_sorted(ids))
    }

    /// `|ball(v, k)|` computed by convolving per-axis distance counts.
    pub fn ball_size(&self, v: &Vertex, k: u64) -> Result<u64> {
        self.validate(v)?;
        // counts[r] = number of vertices at exactly distance r over the axes
        // processed so far (truncated at k).
        let k = k.min(self.diameter()) as usize;
        let mut counts = vec![0u64; k + 1];
        counts[0] = 1;
        for (&c, &n) in v.coords().iter().zip(&self.axes) {
            let mut next = vec![0u64; k + 1];
            for (r, &cnt) in counts.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                next[r] += cnt;
                for step in 1..=(k - r).min(n as usize - 1) {
                    let ways =
                        (step < c as usize) as u64 + (c as usize + step <= n as usize) as u64;
                    next[r + step] += cnt * ways;
                }
            }
            counts = next;
        }
        Ok(counts.iter().sum())
    }

    /// `c(k) = max_v |ball(v, k)|`, attained at the center vertex.
    pub fn c(&self, k: u64) -> u64 {
        self.ball_size(&self.center(), k)
            .expect("center is always valid")
    }

    /// `{u : |u - v| = m}`, the BFS frontier at depth `m`.
    pub fn sphere(&self, v: &Vertex, m: u64) -> Result<VertexSet> {
        let id = self.id(v)?;
        let layers = self.bfs_layers(id, m);
        Ok(match layers.into_iter().nth(m as usize) {
            Some(layer) => VertexSet::from_sorted(layer),
            None => VertexSet::default(),
        })
    }

    /// Members of `s` with at least one neighbor outside `s`.
    pub fn boundary(&self, s: &VertexSet) -> VertexSet {
        let mut buf = Vec::new();
        let mut out = VertexSet::default();
        for &u in s.ids() {
            self.neighbor_ids_into(u, &mut buf);
            if buf.iter().any(|w| !s.contains(*w)) {
                out.insert(u);
            }
        }
        out
    }

    /// Non-strict local minimum test: `f(v) <= f(w)` for every neighbor `w`.
    pub fn is_local_min(&self, v: VertexId, f: impl Fn(VertexId) -> i64) -> bool {
        let fv = f(v);
        let mut buf = Vec::new();
        self.neighbor_ids_into(v, &mut buf);
        buf.iter().all(|&w| fv <= f(w))
    }

    /// Position of `v` on the boustrophedon Hamilton path of this box: the
    /// path of the first `D - 1` coordinates is walked forward while the last
    /// coordinate is odd and backward while it is even.
    pub fn hamilton_rank(&self, v: &Vertex) -> Result<u64> {
        self.validate(v)?;
        let mut rank = 0u64;
        let mut sub_order = 1u64;
        for (&c, &k) in v.coords().iter().zip(&self.axes) {
            let c = (c - 1) as u64;
            rank = if c.is_multiple_of(2) {
                rank
            } else {
                sub_order - 1 - rank
            };
            rank += c * sub_order;
            sub_order *= k as u64;
        }
        Ok(rank)
    }

    pub fn hamilton_unrank(&self, rank: u64) -> Result<Vertex> {
        if rank >= self.order {
            return input(format!("rank {rank} beyond {} vertices", self.order));
        }
        let mut coords = vec![0u32; self.dim()];
        let mut r = rank;
        for axis in (0..self.dim()).rev() {
            let sub = self.strides[axis];
            let c = r / sub;
            let within = r % sub;
            coords[axis] = c as u32 + 1;
            r = if c.is_multiple_of(2) {
                within
            } else {
                sub - 1 - within
            };
        }
        Ok(Vertex(coords))
    }

    /// Next vertex on the Hamilton path, or `None` at its last vertex.
    pub fn hamilton_successor(&self, v: &Vertex) -> Result<Option<Vertex>> {
        let r = self.hamilton_rank(v)?;
        if r + 1 == self.order {
            Ok(None)
        } else {
            self.hamilton_unrank(r + 1).map(Some)
        }
    }

    /// Iterator over the whole Hamilton path.
    pub fn hamilton_path(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.order).map(move |r| self.hamilton_unrank(r).expect("rank in range"))
    }

    pub fn vertex_ids(&self) -> std::ops::Range<VertexId> {
        0..self.order
    }
}

/// Successor on `HamPath_{k,l}` of `[k]^l`.
pub fn hamilton_successor(k: u32, l: u32, v: &Vertex) -> Result<Option<Vertex>> {
    Graph::new(GraphFamily::hypercube(k, l))?.hamilton_successor(v)
}

/// Shortest-path distance in `g`, which is also the metric used inside the
/// recursive solver regardless of the current candidate region.
pub fn distance_within(g: &Graph, u: VertexId, v: VertexId) -> u64 {
    g.distance_ids(u, v)
}

fn l1(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y) as u64).sum()
}

/// Ordered, duplicate-free collection of vertex ids of one graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSet {
    items: Vec<VertexId>,
    index: HashSet<VertexId>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    fn from_sorted(items: Vec<VertexId>) -> Self {
        let index = items.iter().copied().collect();
        VertexSet { items, index }
    }

    /// Inserts `v` unless present; returns whether it was new.
    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = self.index.insert(v);
        if fresh {
            self.items.push(v);
        }
        fresh
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains(&v)
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn vertices(&self, g: &Graph) -> Vec<Vertex> {
        self.items.iter().map(|&i| g.vertex(i)).collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::default();
        for v in iter {
            s.insert(v);
        }
        s
    }
}
