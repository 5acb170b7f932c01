//! JSON instance files and a uniform view over every generator's output.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::{BlockInstance, BlockInstanceFile};
use super::walk2d::{TwoDInstanceFile, TwoDWalkInstance};
use super::{PathInstance, PathInstanceFile, UniquenessReport};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::oracle::Objective;

/// A clocked walk on `[n]^m x [n]^(d-m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridIntFile {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    #[serde(flatten)]
    pub instance: PathInstanceFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceFile {
    Product(PathInstanceFile),
    GridIntM(GridIntFile),
    GridBlock(BlockInstanceFile),
    #[serde(rename = "grid-2d-improved")]
    Grid2dImproved(TwoDInstanceFile),
}

/// Any generated hard instance.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Instance {
    Product(PathInstance),
    GridIntM {
        n: u32,
        d: u32,
        m: u32,
        inner: PathInstance,
    },
    Block(BlockInstance),
    TwoD(TwoDWalkInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Product(_) => "product",
            Instance::GridIntM { .. } => "grid-int-m",
            Instance::Block(_) => "grid-block",
            Instance::TwoD(_) => "grid-2d-improved",
        }
    }

    /// Graph the induced function lives on.
    pub fn graph(&self) -> &Graph {
        match self {
            Instance::Product(p) | Instance::GridIntM { inner: p, .. } => p.product(),
            Instance::Block(b) => b.graph(),
            Instance::TwoD(t) => t.graph(),
        }
    }

    pub fn eval(&self, v: VertexId) -> i64 {
        match self {
            Instance::Product(p) | Instance::GridIntM { inner: p, .. } => p.eval_fx(v),
            Instance::Block(b) => b.eval_fx(v),
            Instance::TwoD(t) => t.eval_fx_2d(v),
        }
    }

    /// The designated unique local minimum.
    pub fn end(&self) -> VertexId {
        match self {
            Instance::Product(p) | Instance::GridIntM { inner: p, .. } => p.end(),
            Instance::Block(b) => b.end(),
            Instance::TwoD(t) => t.end(),
        }
    }

    /// Number of walk steps `T`.
    pub fn steps(&self) -> usize {
        match self {
            Instance::Product(p) | Instance::GridIntM { inner: p, .. } => p.t_len(),
            Instance::Block(b) => b.virtual_instance().t_len(),
            Instance::TwoD(t) => t.steps().len(),
        }
    }

    /// Vertices on the hidden path.
    pub fn path_len(&self) -> usize {
        match self {
            Instance::Product(p) | Instance::GridIntM { inner: p, .. } => {
                let mut v = p.path();
                v.dedup();
                v.len()
            }
            Instance::Block(b) => b.path().len(),
            Instance::TwoD(t) => t.path().len(),
        }
    }

    pub fn verify_unique_local_min(&self) -> Result<UniquenessReport> {
        match self {
            Instance::Product(p) | Instance::GridIntM { inner: p, .. } => {
                p.verify_unique_local_min()
            }
            Instance::Block(b) => b.verify_unique_local_min(),
            Instance::TwoD(t) => t.verify_unique_local_min(),
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        match self {
            Instance::Product(p) => InstanceFile::Product(p.to_file()),
            Instance::GridIntM { n, d, m, inner } => InstanceFile::GridIntM(GridIntFile {
                n: *n,
                d: *d,
                m: *m,
                instance: inner.to_file(),
            }),
            Instance::Block(b) => InstanceFile::GridBlock(b.to_file()),
            Instance::TwoD(t) => InstanceFile::Grid2dImproved(t.to_file()),
        }
    }

    /// Rebuilds an instance, validating every structural invariant.
    pub fn from_file(file: InstanceFile) -> Result<Self> {
        Ok(match file {
            InstanceFile::Product(p) => Instance::Product(PathInstance::from_file(p)?),
            InstanceFile::GridIntM(g) => {
                let inner = PathInstance::from_file(g.instance)?;
                let f = inner.frame();
                if f.gw.axes() != vec![g.n; g.m as usize].as_slice()
                    || f.gc.axes() != vec![g.n; (g.d - g.m) as usize].as_slice()
                {
                    return Err(Error::Invariant(format!(
                        "graphs do not match n = {}, d = {}, m = {}",
                        g.n, g.d, g.m
                    )));
                }
                Instance::GridIntM {
                    n: g.n,
                    d: g.d,
                    m: g.m,
                    inner,
                }
            }
            InstanceFile::GridBlock(b) => Instance::Block(BlockInstance::from_file(b)?),
            InstanceFile::Grid2dImproved(t) => Instance::TwoD(TwoDWalkInstance::from_file(t)?),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_file(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

impl Objective for Instance {
    fn value(&self, v: VertexId) -> i64 {
        self.eval(v)
    }
}
