//! A query-complexity laboratory for Local Search on black-box functions
//! over implicit graphs.
//!
//! The crate is organised by capability:
//!
//! - [`graph`]: lines, hypercubes, grids and their products, with balls,
//!   spheres, boundaries and Hamilton-path successors.
//! - [`oracle`]: query-counting value and membership oracles with unit and
//!   simulated-quantum (Dürr–Høyer) cost models.
//! - [`adversary`]: hard instances built from clocked random walks, the
//!   induced functions with a unique local minimum, and the membership
//!   reduction.
//! - [`walks`]: exact hitting probabilities for the barrier line walk, the
//!   parity walk on the hypercube, product walks, and the resulting bound
//!   estimates.
//! - [`solvers`]: steepest descent, sample-then-descend, and the recursive
//!   shrinking-region algorithm.
//! - [`bench`] and [`cli`]: the experiment harness behind the `lsq` binary.

pub mod adversary;
pub mod bench;
pub mod cli;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod solvers;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{Graph, GraphFamily, Vertex, VertexId, VertexSet};
pub use oracle::{CostModel, CountingOracle, Membership, Objective, QueryLedger};
