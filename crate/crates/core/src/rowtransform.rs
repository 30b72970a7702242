//! From an extended depth-decomposition to a regular matrix `B` such that
//! `A' = BA` has dual tree-depth at most the decomposition depth.
//!
//! With `w_1, …, w_m` the node vectors in preorder and `B_g` the matrix with
//! those columns, `B = B_g⁻¹`, so column `j` of `A'` holds the coordinates of
//! column `j` of `A` in the basis `{w_i}`. Those coordinates vanish outside
//! the root path of the column's leaf, which is what bounds the dual graph.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::config::Limits;
use crate::decomp::{branch_depth_exact, extend, from_dual_forest, verify_extended, ExtendedDepthDecomposition};
use crate::error::{Error, Result};
use crate::graphs::{dual_graph, treedepth, verify_td_witness, RootedForest};
use crate::matroid::VectorMatroid;
use crate::ratmat::{lcm_of_denominators, Rat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Decomposition of minimum depth from the exact search.
    Exact,
    /// Decomposition built from a (possibly non-optimal) dual tree-depth witness.
    Heuristic,
    /// Decomposition supplied by the caller.
    Supplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Heuristic => "heuristic",
            Provenance::Supplied => "supplied",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformResult {
    /// Input matrix before dependent rows were dropped.
    pub source: RatMatrix,
    /// Rows of `source` kept (a maximal independent set, greedy in order).
    pub kept_rows: Vec<usize>,
    pub removed_rows: Vec<usize>,
    /// Regular `r x r` matrix, `r = kept_rows.len()`.
    pub b: RatMatrix,
    /// `B` times the kept rows of `source`.
    pub a_prime: RatMatrix,
    /// Forest on the rows of `A'` whose closure contains its dual graph.
    pub witness_forest: RootedForest,
    pub reported_depth: usize,
    pub provenance: Provenance,
    /// Exact branch-depth when the exact search ran.
    pub branch_depth: Option<usize>,
    pub decomposition: ExtendedDepthDecomposition,
    /// Tree node carrying the basis vector of each row of `A'`.
    pub row_nodes: Vec<usize>,
}

impl TransformResult {
    pub fn reduced_source(&self) -> RatMatrix {
        self.source.select_rows(&self.kept_rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineOutcome {
    Transformed(Box<TransformResult>),
    BranchDepthExceeded { branch_depth: usize, bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Exact search within the limits, heuristic beyond them.
    Auto,
    /// Exact search only; size limits are errors.
    Exact,
    /// Always build from a dual tree-depth witness.
    Heuristic,
}

/// Builds `B` and `A' = BA` from an extended depth-decomposition of the
/// column matroid of `a`, whose rows must be linearly independent.
///
/// Each column of `A'` is obtained by solving the square system restricted
/// to the basis vectors on the column's root path, then the whole matrix is
/// checked against the product `B·A`.
pub fn build_transform(a: &RatMatrix, e: &ExtendedDepthDecomposition) -> Result<TransformResult> {
    let m = a.rows();
    let rank = a.rank();
    if rank < m {
        return Err(Error::RankDeficient { rank, rows: m });
    }
    let matroid = VectorMatroid::from_columns(a);
    verify_extended(&matroid, e)?;

    let row_nodes: Vec<usize> = e
        .tree
        .preorder()
        .into_iter()
        .filter(|&v| v != e.tree.root())
        .collect();
    debug_assert_eq!(row_nodes.len(), m);
    let mut row_of_node = vec![usize::MAX; e.tree.node_count()];
    for (i, &v) in row_nodes.iter().enumerate() {
        row_of_node[v] = i;
    }
    let basis: Vec<Vec<Rat>> = row_nodes.iter().map(|v| e.basis_map[v].clone()).collect();
    let b_g = RatMatrix::from_columns(m, &basis)?;
    let b = b_g.invert()?;

    let mut a_prime = RatMatrix::zeros(m, a.cols());
    for j in 0..a.cols() {
        let mut w: Vec<usize> = e
            .tree
            .path_nodes(e.leaf_map[&j])
            .iter()
            .map(|&v| row_of_node[v])
            .collect();
        w.sort_unstable();
        if w.is_empty() {
            continue;
        }
        let restricted = b_g.select_cols(&w);
        let rows = restricted.independent_rows();
        if rows.len() != w.len() {
            return Err(Error::Internal("path basis vectors are dependent".into()));
        }
        let square = restricted.select_rows(&rows);
        let column = a.column(j);
        let rhs: Vec<Rat> = rows.iter().map(|&r| column[r].clone()).collect();
        let coords = square.solve(&rhs)?;
        for (&i, c) in w.iter().zip(coords) {
            a_prime.set(i, j, c);
        }
    }
    if b.mul(a)? != a_prime {
        return Err(Error::Internal(
            "restricted-system columns disagree with B·A".into(),
        ));
    }

    let parent: Vec<Option<usize>> = row_nodes
        .iter()
        .map(|&v| {
            e.tree
                .parent(v)
                .filter(|&p| p != e.tree.root())
                .map(|p| row_of_node[p])
        })
        .collect();
    let witness_forest = RootedForest::new(parent).map_err(|err| Error::Internal(err.to_string()))?;
    let reported_depth = e.depth();
    if witness_forest.height() > reported_depth
        || !verify_td_witness(&dual_graph(&a_prime), &witness_forest)
    {
        return Err(Error::Internal("witness forest does not cover the dual graph".into()));
    }

    Ok(TransformResult {
        source: a.clone(),
        kept_rows: (0..m).collect(),
        removed_rows: Vec::new(),
        b,
        a_prime,
        witness_forest,
        reported_depth,
        provenance: Provenance::Supplied,
        branch_depth: None,
        decomposition: e.clone(),
        row_nodes,
    })
}

/// Drops dependent rows, then either reports that the branch-depth exceeds
/// `bound` or returns a transform whose depth equals the branch-depth (exact
/// search) or is bounded by the dual tree-depth of the reduced matrix
/// (heuristic).
pub fn transform_pipeline(
    a: &RatMatrix,
    bound: usize,
    strategy: Strategy,
    limits: &Limits,
) -> Result<PipelineOutcome> {
    let kept = a.independent_rows();
    let kept_set: BTreeSet<usize> = kept.iter().copied().collect();
    let removed: Vec<usize> = (0..a.rows()).filter(|i| !kept_set.contains(i)).collect();
    let reduced = a.select_rows(&kept);
    let matroid = VectorMatroid::from_columns(&reduced);

    let exact = if strategy == Strategy::Heuristic {
        None
    } else {
        match branch_depth_exact(&matroid, limits) {
            Ok(found) => Some(found),
            Err(Error::SizeLimit { .. }) if strategy == Strategy::Auto => None,
            Err(err) => return Err(err),
        }
    };

    let (ext, provenance, bd) = match exact {
        Some((bd, _)) if bd > bound => {
            return Ok(PipelineOutcome::BranchDepthExceeded {
                branch_depth: bd,
                bound,
            })
        }
        Some((bd, d)) => (extend(&matroid, &d)?, Provenance::Exact, Some(bd)),
        None => {
            let td = treedepth(&dual_graph(&reduced), limits.max_vertices);
            let d = from_dual_forest(&reduced, &td.forest)?;
            (extend(&matroid, &d)?, Provenance::Heuristic, None)
        }
    };

    let mut result = build_transform(&reduced, &ext)?;
    if let Some(bd) = bd {
        if result.reported_depth != bd {
            return Err(Error::Internal(format!(
                "extension depth {} differs from branch-depth {bd}",
                result.reported_depth
            )));
        }
    }
    result.source = a.clone();
    result.kept_rows = kept;
    result.removed_rows = removed;
    result.provenance = provenance;
    result.branch_depth = bd;
    Ok(PipelineOutcome::Transformed(Box::new(result)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub ec_a: u64,
    pub ec_a_prime: u64,
    pub ec_b: u64,
    pub depth: usize,
    /// Number of nonzero entries in each column of `A'`.
    pub column_support: Vec<usize>,
    /// Every column of `A'` is supported on the rows of one root path.
    pub supports_on_root_paths: bool,
}

impl CertificateReport {
    pub fn max_support(&self) -> usize {
        self.column_support.iter().copied().max().unwrap_or(0)
    }
}

/// Entry complexities of `A`, `A'` and `B`, and the column-support check.
pub fn entry_complexity_certificate(a: &RatMatrix, result: &TransformResult) -> CertificateReport {
    let e = &result.decomposition;
    let mut node_row = std::collections::BTreeMap::new();
    for (i, &v) in result.row_nodes.iter().enumerate() {
        node_row.insert(v, i);
    }
    let mut supports_on_root_paths = true;
    let mut column_support = Vec::with_capacity(result.a_prime.cols());
    for j in 0..result.a_prime.cols() {
        let support: Vec<usize> = (0..result.a_prime.rows())
            .filter(|&i| !result.a_prime.get(i, j).is_zero())
            .collect();
        let allowed: BTreeSet<usize> = e
            .leaf_map
            .get(&j)
            .map(|&leaf| e.tree.path_nodes(leaf).iter().map(|v| node_row[v]).collect())
            .unwrap_or_default();
        if support.iter().any(|i| !allowed.contains(i)) {
            supports_on_root_paths = false;
        }
        column_support.push(support.len());
    }
    CertificateReport {
        ec_a: a.entry_complexity(),
        ec_a_prime: result.a_prime.entry_complexity(),
        ec_b: result.b.entry_complexity(),
        depth: result.reported_depth,
        column_support,
        supports_on_root_paths,
    }
}

/// Scales each row of `[A' | b']` by the lcm of its denominators. The zero
/// pattern, the dual graph and the solution set are unchanged.
pub fn integerize(a_prime: &RatMatrix, b_prime: &[Rat]) -> Result<(RatMatrix, Vec<Rat>)> {
    if b_prime.len() != a_prime.rows() {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    let mut out = a_prime.clone();
    let mut rhs = b_prime.to_vec();
    for (i, b) in rhs.iter_mut().enumerate() {
        let row = out.row(i).to_vec();
        let scale = Rat::from_integer(lcm_of_denominators(row.iter().chain(std::iter::once(&*b))));
        if scale == Rat::from_integer(BigInt::from(1)) {
            continue;
        }
        for (j, x) in row.iter().enumerate() {
            out.set(i, j, x * &scale);
        }
        *b = &*b * &scale;
    }
    Ok((out, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{DepthDecomposition, RootedTree};
    use crate::graphs::treedepth_exact;
    use crate::ratmat::{frac, rat};

    fn worked_example(m: usize) -> RatMatrix {
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| if i > 0 && j == i - 1 { 2 } else { 1 }).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        RatMatrix::from_i64(&refs)
    }

    fn transformed(outcome: PipelineOutcome) -> TransformResult {
        match outcome {
            PipelineOutcome::Transformed(r) => *r,
            other => panic!("expected a transform, got {other:?}"),
        }
    }

    #[test]
    fn identity_star_gives_identity() {
        let id = RatMatrix::identity(3);
        let e = extend(
            &VectorMatroid::from_columns(&id),
            &DepthDecomposition {
                tree: RootedTree::star(3),
                leaf_map: (0..3).map(|j| (j, j + 1)).collect(),
            },
        )
        .unwrap();
        let r = build_transform(&id, &e).unwrap();
        assert_eq!(r.b, RatMatrix::identity(3));
        assert_eq!(r.a_prime, id);
        assert_eq!(r.reported_depth, 1);
    }

    #[test]
    fn worked_example_matrix_b_and_dual_forest() {
        // The star-shaped forest witnesses the low-depth form directly.
        let a_prime = RatMatrix::from_i64(&[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0]]);
        let f = RootedForest::new(vec![None, Some(0), Some(0)]).unwrap();
        let d = from_dual_forest(&a_prime, &f).unwrap();
        let e = extend(&VectorMatroid::from_columns(&a_prime), &d).unwrap();
        let r = build_transform(&a_prime, &e).unwrap();
        assert!(r.reported_depth <= 2);
        assert!(treedepth_exact(&dual_graph(&r.a_prime), 20).unwrap().0 <= 2);
        assert_eq!(r.b.mul(&a_prime).unwrap(), r.a_prime);
    }

    #[test]
    fn pipeline_on_worked_example() {
        let a = worked_example(5);
        let r = transformed(transform_pipeline(&a, 2, Strategy::Auto, &Limits::default()).unwrap());
        assert_eq!(r.provenance, Provenance::Exact);
        assert_eq!(r.branch_depth, Some(1));
        assert_eq!(r.b.mul(&a).unwrap(), r.a_prime);
        assert_eq!(treedepth_exact(&dual_graph(&r.a_prime), 20).unwrap().0, 1);
        let cert = entry_complexity_certificate(&a, &r);
        assert!(cert.supports_on_root_paths);
        assert!(cert.max_support() <= 2);
    }

    #[test]
    fn pipeline_reports_exceeded() {
        let a = RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(
            transform_pipeline(&a, 1, Strategy::Auto, &Limits::default()).unwrap(),
            PipelineOutcome::BranchDepthExceeded {
                branch_depth: 2,
                bound: 1
            }
        );
        let r = transformed(transform_pipeline(&a, 2, Strategy::Auto, &Limits::default()).unwrap());
        assert_eq!(r.reported_depth, 2);
    }

    #[test]
    fn pipeline_drops_dependent_rows() {
        let a = RatMatrix::from_i64(&[&[1, 1, 0], &[2, 2, 0], &[0, 1, 1]]);
        let r = transformed(transform_pipeline(&a, 3, Strategy::Auto, &Limits::default()).unwrap());
        assert_eq!(r.kept_rows, vec![0, 2]);
        assert_eq!(r.removed_rows, vec![1]);
        assert_eq!(r.b.rows(), 2);
        assert_eq!(r.b.mul(&r.reduced_source()).unwrap(), r.a_prime);
    }

    #[test]
    fn strategies_and_limits() {
        let id = RatMatrix::identity(7);
        let limits = Limits::default();
        assert!(matches!(
            transform_pipeline(&id, 1, Strategy::Exact, &limits),
            Err(Error::SizeLimit { .. })
        ));
        let r = transformed(transform_pipeline(&id, 1, Strategy::Auto, &limits).unwrap());
        assert_eq!(r.provenance, Provenance::Heuristic);
        assert_eq!(r.reported_depth, 1);
        let r = transformed(transform_pipeline(&id, 1, Strategy::Heuristic, &limits).unwrap());
        assert_eq!(r.branch_depth, None);
    }

    #[test]
    fn build_transform_requires_full_row_rank() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let e = ExtendedDepthDecomposition {
            tree: RootedTree::path(1),
            leaf_map: [(0, 1), (1, 1)].into_iter().collect(),
            basis_map: [(1, vec![rat(1), rat(2)])].into_iter().collect(),
        };
        assert!(matches!(build_transform(&a, &e), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn integerize_examples() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[0, 5]]);
        let (ai, bi) = integerize(&a, &[rat(3), rat(0)]).unwrap();
        assert_eq!((ai, bi), (a, vec![rat(3), rat(0)]));
        let a = RatMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 3)]]).unwrap();
        let (ai, bi) = integerize(&a, &[rat(1)]).unwrap();
        assert_eq!(ai, RatMatrix::from_i64(&[&[3, 2]]));
        assert_eq!(bi, vec![rat(6)]);
    }
}
