//! Vector matroids over matrix columns with a memoized rank oracle.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::Mutex;

use lru::LruCache;

use crate::error::{Error, Result};
use crate::ratmat::{rank_of_vectors, Rat, RatMatrix, Subspace};

pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;

/// Column matroid of a rational matrix. Elements carry stable ids (the
/// column index in the originating matrix), which survive contraction.
pub struct VectorMatroid {
    dim: usize,
    ids: Vec<usize>,
    vectors: Vec<Vec<Rat>>,
    position: HashMap<usize, usize>,
    cache: Mutex<LruCache<Vec<usize>, usize>>,
}

impl Clone for VectorMatroid {
    fn clone(&self) -> Self {
        VectorMatroid::new(self.dim, self.ids.clone(), self.vectors.clone())
            .expect("already validated")
    }
}

impl std::fmt::Debug for VectorMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VectorMatroid")
            .field("dim", &self.dim)
            .field("ids", &self.ids)
            .finish_non_exhaustive()
    }
}

impl VectorMatroid {
    pub fn new(dim: usize, ids: Vec<usize>, vectors: Vec<Vec<Rat>>) -> Result<Self> {
        Self::with_cache_capacity(dim, ids, vectors, DEFAULT_CACHE_CAPACITY)
    }

    pub fn with_cache_capacity(
        dim: usize,
        ids: Vec<usize>,
        vectors: Vec<Vec<Rat>>,
        capacity: usize,
    ) -> Result<Self> {
        if ids.len() != vectors.len() {
            return Err(Error::DimensionMismatch("one vector per element id".into()));
        }
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("element vector length".into()));
        }
        let position: HashMap<usize, usize> =
            ids.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        if position.len() != ids.len() {
            return Err(Error::DimensionMismatch("duplicate element id".into()));
        }
        let capacity = NonZeroUsize::new(capacity.max(1)).expect("nonzero");
        Ok(VectorMatroid {
            dim,
            ids,
            vectors,
            position,
            cache: Mutex::new(LruCache::new(capacity)),
        })
    }

    /// The matroid on the columns of `a`, with element `j` for column `j`.
    pub fn from_columns(a: &RatMatrix) -> Self {
        VectorMatroid::new(a.rows(), (0..a.cols()).collect(), a.columns())
            .expect("matrix columns are consistent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Element ids in ground-set order.
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.position.contains_key(&id)
    }

    pub fn vector(&self, id: usize) -> &[Rat] {
        &self.vectors[self.position[&id]]
    }

    pub fn vectors_of(&self, set: &[usize]) -> Vec<Vec<Rat>> {
        set.iter().map(|id| self.vector(*id).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        self.rank_of(&self.ids)
    }

    /// Rank of the elements with the given ids. Duplicate ids are harmless.
    pub fn rank_of(&self, set: &[usize]) -> usize {
        let mut key: Vec<usize> = set.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.is_empty() {
            return 0;
        }
        if let Some(&r) = self.cache.lock().expect("cache poisoned").get(&key) {
            return r;
        }
        let r = self.rank_uncached(&key);
        self.cache.lock().expect("cache poisoned").put(key, r);
        r
    }

    pub fn rank_uncached(&self, set: &[usize]) -> usize {
        rank_of_vectors(self.dim, &self.vectors_of(set))
    }

    pub fn span_of(&self, set: &[usize]) -> Subspace {
        Subspace::span(self.dim, &self.vectors_of(set))
    }

    /// Restriction to `set` (in the given order) with every vector replaced
    /// by its quotient by `k`. Ranks satisfy `r'(S') = dim(S' ∪ K) - dim K`.
    pub fn contract_to_quotient(&self, set: &[usize], k: &Subspace) -> Result<VectorMatroid> {
        if let Some(bad) = set.iter().find(|id| !self.contains(**id)) {
            return Err(Error::DimensionMismatch(format!("element {bad} not in ground set")));
        }
        if k.ambient() != self.dim {
            return Err(Error::DimensionMismatch("subspace ambient dimension".into()));
        }
        let q = k.quotient_by(&self.vectors_of(set));
        VectorMatroid::new(self.dim, set.to_vec(), q.quotients)
    }

    /// Greedy basis in ground-set order.
    pub fn greedy_basis(&self) -> Vec<usize> {
        let mut basis = Vec::new();
        for &id in &self.ids {
            basis.push(id);
            if self.rank_of(&basis) < basis.len() {
                basis.pop();
            }
        }
        basis
    }
}

pub fn rank_of(m: &VectorMatroid, set: &[usize]) -> usize {
    m.rank_of(set)
}

pub fn contract_to_quotient(m: &VectorMatroid, set: &[usize], k: &Subspace) -> Result<VectorMatroid> {
    m.contract_to_quotient(set, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::rat;

    fn cols(vs: &[&[i64]]) -> VectorMatroid {
        let dim = vs[0].len();
        VectorMatroid::new(
            dim,
            (0..vs.len()).collect(),
            vs.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        let m = cols(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(m.rank_of(&[]), 0);
        assert_eq!(m.rank_of(&[0, 1, 2]), 2);
        assert_eq!(m.rank_of(&[2, 2]), 1);
        let id = VectorMatroid::from_columns(&RatMatrix::identity(4));
        assert_eq!(id.rank(), 4);
    }

    #[test]
    fn contraction_examples() {
        let m = cols(&[&[1, 0], &[0, 1], &[1, 1]]);
        let same = m.contract_to_quotient(&[0, 2], &Subspace::zero(2)).unwrap();
        assert_eq!(same.ids(), &[0, 2]);
        assert_eq!(same.vector(2), m.vector(2));

        let e1 = Subspace::span(2, &[vec![rat(1), rat(0)]]);
        let loops = cols(&[&[1, 0], &[1, 0]]).contract_to_quotient(&[0, 1], &e1).unwrap();
        assert_eq!(loops.rank(), 0);

        let c = m.contract_to_quotient(&[1, 2], &e1).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.vector(1), c.vector(2));
    }

    #[test]
    fn contraction_rejects_unknown_ids() {
        let m = cols(&[&[1, 0]]);
        assert!(m.contract_to_quotient(&[7], &Subspace::zero(2)).is_err());
    }

    #[test]
    fn tiny_cache_still_correct() {
        let m = VectorMatroid::with_cache_capacity(
            2,
            vec![0, 1, 2],
            vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)], vec![rat(1), rat(1)]],
            1,
        )
        .unwrap();
        for _ in 0..3 {
            assert_eq!(m.rank_of(&[0]), 1);
            assert_eq!(m.rank_of(&[0, 1, 2]), 2);
        }
    }

    #[test]
    fn greedy_basis_in_order() {
        let m = cols(&[&[0, 0], &[1, 0], &[2, 0], &[0, 3]]);
        assert_eq!(m.greedy_basis(), vec![1, 3]);
    }
}
