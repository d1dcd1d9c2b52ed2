//! Steiner distance hypermatrices of trees.
//!
//! The crate builds the order-`k` hypermatrix whose entries are Steiner
//! distances of vertex tuples of a tree, turns it into the associated
//! `k`-form, and checks vanishing of the hyperdeterminant by exhibiting
//! exact nullvectors of the gradient system over cyclotomic fields.
//!
//! Vertices are 0-based indices in the Rust API. Text formats (edge lists,
//! reports) use 1-based labels.

pub mod error;
pub mod forms;
pub mod gp_matrix;
pub mod hypermatrix;
pub mod nullspace;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod smalldet;
pub mod tree;

pub use error::{Error, Result};
pub use hypermatrix::Hypermatrix;
pub use poly::SparsePoly;
pub use scalar::{CFloat, CycNum, Rat, Scalar};
pub use tree::Tree;

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
