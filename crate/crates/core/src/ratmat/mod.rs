//! Exact rational linear algebra: scalars, dense matrices and subspaces.

mod matrix;
mod rat;
mod subspace;

pub use matrix::{RatMatrix, Rref};
pub use rat::{encoding_length, frac, is_integer, lcm_of_denominators, parse_rat, rat, Rat};
pub use subspace::{rank_of_vectors, unit_vector, Quotient, Subspace};

use crate::error::Result;

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

pub fn invert(m: &RatMatrix) -> Result<RatMatrix> {
    m.invert()
}

pub fn solve_system(m: &RatMatrix, rhs: &[Rat]) -> Result<Vec<Rat>> {
    m.solve(rhs)
}

pub fn entry_complexity(m: &RatMatrix) -> u64 {
    m.entry_complexity()
}

pub fn subspace_intersection(u: &Subspace, v: &Subspace) -> Subspace {
    u.intersection(v)
}

pub fn quotient_by(k: &Subspace, vectors: &[Vec<Rat>]) -> Quotient {
    k.quotient_by(vectors)
}
