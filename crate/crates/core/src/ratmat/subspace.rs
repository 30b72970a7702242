use num_traits::{One, Zero};

use super::matrix::RatMatrix;
use super::rat::Rat;
use crate::error::{Error, Result};

/// A linear subspace of `Q^ambient`, stored as a list of independent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

/// Output of [`Subspace::quotient_by`].
#[derive(Clone, Debug)]
pub struct Quotient {
    /// The fixed complement `B` of `K` inside `span(K ∪ vectors)`.
    pub complement: Subspace,
    /// For each input vector `v`, the unique `q ∈ B` with `v - q ∈ K`.
    pub quotients: Vec<Vec<Rat>>,
}

pub fn rank_of_vectors(ambient: usize, vectors: &[Vec<Rat>]) -> usize {
    if vectors.is_empty() || ambient == 0 {
        return 0;
    }
    RatMatrix::from_columns(ambient, vectors)
        .expect("vector length mismatch")
        .rank()
}

pub fn unit_vector(ambient: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); ambient];
    v[i] = Rat::one();
    v
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    /// Span of `vectors`; the basis is the greedy independent subsequence.
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        let mut basis: Vec<Vec<Rat>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
            basis.push(v.clone());
            if rank_of_vectors(ambient, &basis) < basis.len() {
                basis.pop();
            }
        }
        Subspace { ambient, basis }
    }

    /// Wraps `basis` after checking it is linearly independent.
    pub fn from_basis(ambient: usize, basis: Vec<Vec<Rat>>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        if rank_of_vectors(ambient, &basis) != basis.len() {
            return Err(Error::DimensionMismatch("basis is linearly dependent".into()));
        }
        Ok(Subspace { ambient, basis })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        rank_of_vectors(self.ambient, &vs) == self.basis.len()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Equality as sets of vectors, independent of the chosen bases.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.contains_subspace(other)
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    /// `U ∩ V` via the kernel of `[U | -V]`: each kernel vector `(a, b)` gives
    /// the common vector `U a = V b`.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        if self.basis.is_empty() || other.basis.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let mut cols = self.basis.clone();
        cols.extend(
            other
                .basis
                .iter()
                .map(|v| v.iter().map(|x| -x.clone()).collect()),
        );
        let stacked = RatMatrix::from_columns(self.ambient, &cols).expect("lengths checked");
        let p = self.basis.len();
        let vectors: Vec<Vec<Rat>> = stacked
            .nullspace()
            .into_iter()
            .map(|k| {
                let mut w = vec![Rat::zero(); self.ambient];
                for (coef, u) in k[..p].iter().zip(&self.basis) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (wi, ui) in w.iter_mut().zip(u) {
                        *wi += coef * ui;
                    }
                }
                w
            })
            .collect();
        if vectors.is_empty() {
            return Subspace::zero(self.ambient);
        }
        // Reduced row echelon rows: a canonical basis, independent of sign
        // and order choices in the kernel computation.
        let rref = RatMatrix::from_rows(vectors).expect("equal lengths").rref();
        let basis = (0..rref.pivots.len()).map(|r| rref.matrix.row(r).to_vec()).collect();
        Subspace {
            ambient: self.ambient,
            basis,
        }
    }

    /// Splits each vector into a component in a fixed complement `B` of `self`
    /// (playing the role of `K`) and a component in `K`.
    ///
    /// A helper complement `C` is built by extending the basis of `K` with unit
    /// vectors in index order until `span(K ∪ C)` covers `span(K ∪ vectors)`.
    /// Projecting along `K` onto `C` restricts to a linear map on
    /// `span(K ∪ vectors)` with kernel exactly `K`; its image is the returned
    /// complement `B`, which lies inside `span(K ∪ vectors)`.
    pub fn quotient_by(&self, vectors: &[Vec<Rat>]) -> Quotient {
        let n = self.ambient;
        let mut target = self.basis.clone();
        target.extend(vectors.iter().cloned());
        let target = Subspace::span(n, &target);

        let mut helper: Vec<Vec<Rat>> = Vec::new();
        let mut covered = self.clone();
        for i in 0..n {
            if covered.contains_subspace(&target) {
                break;
            }
            let e = unit_vector(n, i);
            if !covered.contains(&e) {
                covered.basis.push(e.clone());
                helper.push(e);
            }
        }

        let k = self.dim();
        let mut cols = self.basis.clone();
        cols.extend(helper.iter().cloned());
        let system = RatMatrix::from_columns(n, &cols).expect("lengths checked");
        let quotients: Vec<Vec<Rat>> = vectors
            .iter()
            .map(|v| {
                let coef = system
                    .solve(v)
                    .expect("vector lies in span(K ∪ vectors)");
                let mut q = vec![Rat::zero(); n];
                for (c, h) in coef[k..].iter().zip(&helper) {
                    if c.is_zero() {
                        continue;
                    }
                    for (qi, hi) in q.iter_mut().zip(h) {
                        *qi += c * hi;
                    }
                }
                q
            })
            .collect();
        Quotient {
            complement: Subspace::span(n, &quotients),
            quotients,
        }
    }
}
