//! Depth-decompositions of vector matroids.
//!
//! A depth-decomposition `(T, f)` maps every matroid element to a leaf of a
//! rooted tree `T` with exactly `rank(M)` edges such that any element set has
//! rank at most the number of edges on the union of its leaves' root paths.
//! The extended form adds a vector to every non-root node so that each element
//! lies in the span of the vectors on its root path.

mod capacity;
mod extend;
mod search;
mod tree;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

pub use capacity::{intersection_subspace, repair_capacity, repair_capacity_traced, RepairTrace};
pub use extend::{extend, extend_traced, verify_extended, ExtendStep, ExtendTrace};
pub use search::{branch_depth_exact, level_sequences};
pub use tree::RootedTree;

use crate::error::{Error, Result};
use crate::graphs::{dual_graph, verify_td_witness, RootedForest};
use crate::matroid::VectorMatroid;
use crate::ratmat::{Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthDecomposition {
    pub tree: RootedTree,
    /// Element id to leaf node.
    pub leaf_map: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedDepthDecomposition {
    pub tree: RootedTree,
    pub leaf_map: BTreeMap<usize, usize>,
    /// Non-root node to its basis vector.
    pub basis_map: BTreeMap<usize, Vec<Rat>>,
}

/// A branch: node `root`, exactly one child `child`, and all descendants of
/// `child`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub root: usize,
    pub child: usize,
    pub nodes: Vec<usize>,
}

impl Branch {
    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }
}

impl DepthDecomposition {
    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    /// Elements mapped into the subtree below (and including) `node`, in id order.
    pub fn elements_below(&self, node: usize) -> Vec<usize> {
        self.leaf_map
            .iter()
            .filter(|&(_, &leaf)| self.tree.is_ancestor_or_self(node, leaf))
            .map(|(&e, _)| e)
            .collect()
    }

    /// Elements of `Ŝ`, those mapped to leaves of the branch.
    pub fn branch_elements(&self, branch: &Branch) -> Vec<usize> {
        self.elements_below(branch.child)
    }

    fn used_leaves(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.leaf_map.values().copied().collect();
        set.into_iter().collect()
    }
}

impl ExtendedDepthDecomposition {
    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn decomposition(&self) -> DepthDecomposition {
        DepthDecomposition {
            tree: self.tree.clone(),
            leaf_map: self.leaf_map.clone(),
        }
    }
}

/// Checks every depth-decomposition condition, reporting the first failure.
///
/// The rank inequality is checked on full leaf preimages only: rank is
/// monotone and the path union of a set depends only on its leaves, so this
/// is equivalent to checking all element subsets.
pub fn check(m: &VectorMatroid, d: &DepthDecomposition, max_leaves: usize) -> Result<()> {
    let invalid = |s: String| Err(Error::InvalidDecomposition(s));
    let ids: BTreeSet<usize> = m.ids().iter().copied().collect();
    let mapped: BTreeSet<usize> = d.leaf_map.keys().copied().collect();
    if ids != mapped {
        return invalid("leaf map does not cover exactly the ground set".into());
    }
    if let Some((e, v)) = d
        .leaf_map
        .iter()
        .find(|&(_, &v)| v >= d.tree.node_count() || !d.tree.is_leaf(v))
    {
        return invalid(format!("element {e} mapped to non-leaf node {v}"));
    }
    let rank = m.rank();
    if d.tree.edge_count() != rank {
        return invalid(format!(
            "tree has {} edges but the matroid has rank {rank}",
            d.tree.edge_count()
        ));
    }
    let leaves = d.used_leaves();
    let max_leaves = max_leaves.min(63);
    if leaves.len() > max_leaves {
        return Err(Error::SizeLimit {
            what: "decomposition leaves",
            actual: leaves.len(),
            limit: max_leaves,
        });
    }
    let preimages: Vec<Vec<usize>> = leaves
        .iter()
        .map(|&l| {
            d.leaf_map
                .iter()
                .filter(|&(_, &v)| v == l)
                .map(|(&e, _)| e)
                .collect()
        })
        .collect();
    let paths: Vec<NodeSet> = leaves
        .iter()
        .map(|&l| NodeSet::from_nodes(d.tree.node_count(), &d.tree.path_nodes(l)))
        .collect();
    for mask in 1u64..(1u64 << leaves.len()) {
        let mut elems = Vec::new();
        let mut union = NodeSet::empty(d.tree.node_count());
        for (k, (pre, path)) in preimages.iter().zip(&paths).enumerate() {
            if mask >> k & 1 == 1 {
                elems.extend_from_slice(pre);
                union.union_with(path);
            }
        }
        let r = m.rank_of(&elems);
        if r > union.len() {
            let set: Vec<usize> = (0..leaves.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| leaves[k])
                .collect();
            return invalid(format!(
                "elements on leaves {set:?} have rank {r} but their paths have {} edges",
                union.len()
            ));
        }
    }
    Ok(())
}

/// True iff `d` is a depth-decomposition of `m`.
pub fn validate(m: &VectorMatroid, d: &DepthDecomposition, max_leaves: usize) -> Result<bool> {
    match check(m, d, max_leaves) {
        Ok(()) => Ok(true),
        Err(Error::InvalidDecomposition(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Builds a depth-decomposition of the column matroid of `a` from a rooted
/// forest on its rows whose closure contains the dual graph.
///
/// The tree adds a new root above the roots of `forest`; node `i + 1` is row
/// `i`. A column goes to the smallest-index leaf below the deepest row in its
/// support (below the new root for zero columns).
pub fn from_dual_forest(a: &RatMatrix, forest: &RootedForest) -> Result<DepthDecomposition> {
    if forest.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "forest has {} vertices for {} rows",
            forest.len(),
            a.rows()
        )));
    }
    let rank = a.rank();
    if rank < a.rows() {
        return Err(Error::RankDeficient {
            rank,
            rows: a.rows(),
        });
    }
    let g = dual_graph(a);
    if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| !forest.are_related(u, v)) {
        return Err(Error::WitnessInvalid(format!(
            "dual edge {{{u}, {v}}} is not in the closure of the forest"
        )));
    }
    debug_assert!(verify_td_witness(&g, forest));
    let parent: Vec<Option<usize>> = std::iter::once(None)
        .chain(forest.parents().iter().map(|p| Some(p.map_or(0, |p| p + 1))))
        .collect();
    let tree = RootedTree::new(parent)?;
    let mut leaf_map = BTreeMap::new();
    for j in 0..a.cols() {
        let deepest = (0..a.rows())
            .filter(|&i| !a.get(i, j).is_zero())
            .map(|i| i + 1)
            .max_by_key(|&node| tree.depth_of(node))
            .unwrap_or(0);
        let leaf = tree
            .subtree(deepest)
            .into_iter()
            .filter(|&v| tree.is_leaf(v))
            .min()
            .expect("every subtree has a leaf");
        leaf_map.insert(j, leaf);
    }
    Ok(DepthDecomposition { tree, leaf_map })
}

/// Branches at the first node (walking down from the root) with two or more
/// children, one per child. Empty for a rooted path.
pub fn primary_branches(tree: &RootedTree) -> Vec<Branch> {
    let mut u = tree.root();
    loop {
        let children = tree.children(u);
        match children.len() {
            0 => return Vec::new(),
            1 => u = children[0],
            _ => {
                return children
                    .into_iter()
                    .map(|c| {
                        let mut nodes = vec![u];
                        nodes.extend(tree.subtree(c));
                        Branch {
                            root: u,
                            child: c,
                            nodes,
                        }
                    })
                    .collect()
            }
        }
    }
}

/// `rank(Ŝ) = ‖S‖ + depth(root of S)`.
pub fn is_at_capacity(m: &VectorMatroid, d: &DepthDecomposition, branch: &Branch) -> bool {
    let elems = d.branch_elements(branch);
    m.rank_of(&elems) == branch.edge_count() + d.tree.depth_of(branch.root)
}

/// Fixed-size bitset over tree nodes.
#[derive(Clone)]
struct NodeSet {
    words: Vec<u64>,
}

impl NodeSet {
    fn empty(n: usize) -> Self {
        NodeSet {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    fn from_nodes(n: usize, nodes: &[usize]) -> Self {
        let mut s = Self::empty(n);
        for &v in nodes {
            s.words[v / 64] |= 1 << (v % 64);
        }
        s
    }

    fn union_with(&mut self, other: &NodeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::rat;

    pub(crate) fn matroid(vs: &[&[i64]]) -> VectorMatroid {
        VectorMatroid::new(
            vs[0].len(),
            (0..vs.len()).collect(),
            vs.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect(),
        )
        .unwrap()
    }

    fn decomp(parent: Vec<Option<usize>>, leaves: &[usize]) -> DepthDecomposition {
        DepthDecomposition {
            tree: RootedTree::new(parent).unwrap(),
            leaf_map: leaves.iter().copied().enumerate().collect(),
        }
    }

    #[test]
    fn validate_examples() {
        let m = matroid(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let path = DepthDecomposition {
            tree: RootedTree::path(3),
            leaf_map: (0..4).map(|e| (e, 3)).collect(),
        };
        assert!(validate(&m, &path, 20).unwrap());

        let id = VectorMatroid::from_columns(&RatMatrix::identity(3));
        let star = decomp(vec![None, Some(0), Some(0), Some(0)], &[1, 2, 3]);
        assert!(validate(&id, &star, 20).unwrap());

        let two = matroid(&[&[1, 0], &[0, 1]]);
        let short = decomp(vec![None, Some(0)], &[1, 1]);
        assert!(!validate(&two, &short, 20).unwrap());
    }

    #[test]
    fn validate_rejects_bad_maps() {
        let id = VectorMatroid::from_columns(&RatMatrix::identity(2));
        // element mapped to the root, which is not a leaf
        let bad = decomp(vec![None, Some(0), Some(0)], &[0, 1]);
        assert!(!validate(&id, &bad, 20).unwrap());
        // rank inequality: both independent elements on one leaf of depth 1
        let crowded = decomp(vec![None, Some(0), Some(0)], &[1, 1]);
        assert!(!validate(&id, &crowded, 20).unwrap());
        let ok = decomp(vec![None, Some(0), Some(0)], &[1, 2]);
        assert!(matches!(
            validate(&id, &ok, 1),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn from_dual_forest_examples() {
        let a_prime = RatMatrix::from_i64(&[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0]]);
        let f = RootedForest::new(vec![None, Some(0), Some(0)]).unwrap();
        let d = from_dual_forest(&a_prime, &f).unwrap();
        assert_eq!(d.depth(), 2);
        assert_eq!(d.leaf_map[&0], 2);
        assert_eq!(d.leaf_map[&1], 3);
        assert_eq!(d.leaf_map[&2], 2);
        assert!(validate(&VectorMatroid::from_columns(&a_prime), &d, 20).unwrap());

        let id = RatMatrix::identity(3);
        let d = from_dual_forest(&id, &RootedForest::isolated(3)).unwrap();
        assert_eq!(d.depth(), 1);
        assert_eq!(d.tree.children(0), vec![1, 2, 3]);

        let a = RatMatrix::from_i64(&[&[1, 1, 1], &[2, 1, 1], &[1, 2, 1]]);
        let path = RootedForest::new(vec![None, Some(0), Some(1)]).unwrap();
        let d = from_dual_forest(&a, &path).unwrap();
        assert!(d.tree.is_path());
        assert_eq!(d.depth(), 3);
        assert!(validate(&VectorMatroid::from_columns(&a), &d, 20).unwrap());
    }

    #[test]
    fn from_dual_forest_errors() {
        let a = RatMatrix::from_i64(&[&[1, 1, 1], &[2, 1, 1], &[1, 2, 1]]);
        let star = RootedForest::new(vec![None, Some(0), Some(0)]).unwrap();
        assert!(matches!(from_dual_forest(&a, &star), Err(Error::WitnessInvalid(_))));
        let dep = RatMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let path = RootedForest::new(vec![None, Some(0)]).unwrap();
        assert!(matches!(
            from_dual_forest(&dep, &path),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn zero_column_goes_below_root() {
        let a = RatMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 1]]);
        let d = from_dual_forest(&a, &RootedForest::isolated(2)).unwrap();
        assert_eq!(d.leaf_map[&1], 1);
        assert!(validate(&VectorMatroid::from_columns(&a), &d, 20).unwrap());
    }

    #[test]
    fn primary_branch_examples() {
        assert!(primary_branches(&RootedTree::path(4)).is_empty());
        let star = primary_branches(&RootedTree::star(3));
        assert_eq!(star.len(), 3);
        assert!(star.iter().all(|b| b.edge_count() == 1 && b.root == 0));
        // root → u, u → {l1, v → l2}
        let t = RootedTree::new(vec![None, Some(0), Some(1), Some(1), Some(3)]).unwrap();
        let bs = primary_branches(&t);
        assert_eq!(bs.len(), 2);
        assert!(bs.iter().all(|b| b.root == 1));
        assert_eq!(
            bs.iter().map(Branch::edge_count).collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn capacity_examples() {
        // root → u → {l1, l2}; e1 ↦ l1, e2, e3 ↦ l2
        let m = matroid(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let d = decomp(vec![None, Some(0), Some(1), Some(1)], &[2, 3, 3]);
        assert!(validate(&m, &d, 20).unwrap());
        let bs = primary_branches(&d.tree);
        assert!(!is_at_capacity(&m, &d, &bs[0]));
        assert!(is_at_capacity(&m, &d, &bs[1]));

        let id = VectorMatroid::from_columns(&RatMatrix::identity(3));
        let star = decomp(vec![None, Some(0), Some(0), Some(0)], &[1, 2, 3]);
        assert!(primary_branches(&star.tree)
            .iter()
            .all(|b| is_at_capacity(&id, &star, b)));
    }
}
