//! Single-sample stochastic minimum spanning trees.
//!
//! The sampling-based algorithm (SAM) draws one sample per edge weight
//! distribution, computes a minimum spanning tree on the samples and pays the
//! true weights. Under exponential weights its expected cost is within a
//! factor `b` of the best fixed tree, where `b` is the size of a largest bond,
//! and that factor is attained in the limit. This crate computes all of these
//! quantities exactly on small instances, estimates them by Monte Carlo, builds
//! the worst-case rate vectors, and carries the same machinery over to
//! matroids with cocircuits in place of bonds.

pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod matroid;
pub mod stochastic;
pub mod tight;
pub mod verify;
mod union_find;

pub use error::{Error, Result};
pub use union_find::UnionFind;
