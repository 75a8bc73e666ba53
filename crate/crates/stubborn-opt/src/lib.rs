//! Selection of stubborn-node sets that speed up convergence to consensus.
//!
//! A random walk on the graph of a DeGroot-style averaging process turns the
//! placement question into set-function minimization: the objective `F(A)`
//! sums the expected first hitting times to `A` from every node outside it.
//! Vertex covers minimize `F` at their cardinality, which anchors a rank
//! scale for everything smaller. This crate provides:
//!
//! - graph ingestion with vertex covers, dominance tests, and component
//!   queries ([`graph`], [`parse`]);
//! - uniform, lazy, and weighted walk matrices with stationary distributions
//!   ([`walk`]);
//! - exact hitting times, fundamental and absorption matrices, and the
//!   quasi-stationary spectrum ([`hitting`]);
//! - upper bounds on `F` from dominance and bottleneck arguments plus a
//!   degree-based surrogate for cheap screening ([`bounds`], [`screen`]);
//! - rank-based starter classes with greedy extension and an exhaustive
//!   oracle ([`optimizer`]);
//! - synchronous consensus iteration for empirical rate checks ([`sim`]).

pub mod bounds;
pub mod error;
pub mod graph;
pub mod hitting;
pub mod nodeset;
pub mod optimizer;
pub mod parse;
pub mod screen;
pub mod sim;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use graph::Graph;
pub use nodeset::NodeSet;
pub use walk::{StationaryDist, WalkKind, WalkMatrix};
