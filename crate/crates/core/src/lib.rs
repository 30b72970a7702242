//! Branch-depth of rational matrices and row transformations to small dual
//! tree-depth.
//!
//! The column matroid of a matrix is invariant under row operations, and its
//! branch-depth equals the smallest dual tree-depth over all row-equivalent
//! matrices. This crate computes that quantity exactly on small inputs,
//! builds the regular matrix `B` realizing it, and feeds the transformed
//! system into a desk-scale integer programming solver.
//!
//! Module map:
//! - [`ratmat`]: exact rationals, matrices and subspaces
//! - [`graphs`]: primal/dual graphs, rooted forests, tree-depth
//! - [`matroid`]: vector matroids with a cached rank oracle
//! - [`decomp`]: depth-decompositions, capacity repair, extension, exact search
//! - [`rowtransform`]: the regular matrix `B` and `A' = BA`
//! - [`ipsolve`]: standard-form IP preprocessing and solvers
//! - [`io`]: JSON and text formats
//! - [`cli`]: the `tdopt` command implementations

pub mod cli;
pub mod config;
pub mod decomp;
pub mod error;
pub mod graphs;
pub mod io;
pub mod ipsolve;
pub mod matroid;
pub mod ratmat;
pub mod rowtransform;

pub use config::Limits;
pub use error::{Error, Result};
