use std::collections::{BTreeMap, BTreeSet};

use super::capacity::{intersection_subspace, repair_capacity_traced};
use super::{primary_branches, DepthDecomposition, ExtendedDepthDecomposition, RootedTree};
use crate::error::{Error, Result};
use crate::matroid::VectorMatroid;
use crate::ratmat::{rank_of_vectors, Rat, Subspace};

/// One level of the recursion in [`extend_traced`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendStep {
    pub rank: usize,
    /// Depth of the common root of the primary branches (0 on a path).
    pub h: usize,
    /// Number of primary branches; 0 when the repaired tree is a rooted path.
    pub branches: usize,
    /// Pairwise hull intersections compared against `K`.
    pub pairs_checked: usize,
    pub repair_moves: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtendTrace {
    pub steps: Vec<ExtendStep>,
}

/// Extends a depth-decomposition with a basis assignment, without increasing
/// the depth.
pub fn extend(m: &VectorMatroid, d: &DepthDecomposition) -> Result<ExtendedDepthDecomposition> {
    extend_traced(m, d).map(|(e, _)| e)
}

pub fn extend_traced(
    m: &VectorMatroid,
    d: &DepthDecomposition,
) -> Result<(ExtendedDepthDecomposition, ExtendTrace)> {
    if d.tree.edge_count() != m.rank() {
        return Err(Error::InvalidDecomposition(format!(
            "tree has {} edges but the matroid has rank {}",
            d.tree.edge_count(),
            m.rank()
        )));
    }
    let mut trace = ExtendTrace::default();
    let e = extend_rec(m, d, &mut trace)?;
    if e.depth() > d.depth() {
        return Err(Error::Internal(format!(
            "extension deepened the tree from {} to {}",
            d.depth(),
            e.depth()
        )));
    }
    verify_extended(m, &e)?;
    Ok((e, trace))
}

fn extend_rec(
    m: &VectorMatroid,
    d: &DepthDecomposition,
    trace: &mut ExtendTrace,
) -> Result<ExtendedDepthDecomposition> {
    let (d, repair) = repair_capacity_traced(m, d)?;
    let branches = primary_branches(&d.tree);

    if branches.is_empty() {
        let basis = m.greedy_basis();
        let mut basis_map = BTreeMap::new();
        let mut node = d.tree.root();
        for id in &basis {
            node = *d
                .tree
                .children(node)
                .first()
                .ok_or_else(|| Error::Internal("path shorter than the rank".into()))?;
            basis_map.insert(node, m.vector(*id).to_vec());
        }
        trace.steps.push(ExtendStep {
            rank: basis.len(),
            h: d.tree.edge_count(),
            branches: 0,
            pairs_checked: 0,
            repair_moves: repair.moves(),
        });
        return Ok(ExtendedDepthDecomposition {
            tree: d.tree,
            leaf_map: d.leaf_map,
            basis_map,
        });
    }

    let u = branches[0].root;
    let h = d.tree.depth_of(u);
    let k = intersection_subspace(m, &d)?;
    trace.steps.push(ExtendStep {
        rank: m.rank(),
        h,
        branches: branches.len(),
        pairs_checked: branches.len() * (branches.len() - 1) / 2,
        repair_moves: repair.moves(),
    });

    // Path of length h carrying the basis of K; branches hang from its end.
    let mut parent: Vec<Option<usize>> = (0..=h).map(|v| v.checked_sub(1)).collect();
    let mut basis_map: BTreeMap<usize, Vec<Rat>> = k
        .basis()
        .iter()
        .enumerate()
        .map(|(i, b)| (i + 1, b.clone()))
        .collect();
    let mut leaf_map = BTreeMap::new();
    let attach = h;

    for branch in &branches {
        let elems = d.branch_elements(branch);
        let quotient = m.contract_to_quotient(&elems, &k)?;
        let local: BTreeMap<usize, usize> = branch
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let local_parent = branch
            .nodes
            .iter()
            .map(|&v| {
                if v == u {
                    None
                } else {
                    d.tree.parent(v).map(|p| local[&p])
                }
            })
            .collect();
        let sub = DepthDecomposition {
            tree: RootedTree::new(local_parent)?,
            leaf_map: elems.iter().map(|&e| (e, local[&d.leaf_map[&e]])).collect(),
        };
        if sub.tree.edge_count() != quotient.rank() {
            return Err(Error::Internal(format!(
                "branch with {} edges has quotient rank {}",
                sub.tree.edge_count(),
                quotient.rank()
            )));
        }
        let ext = extend_rec(&quotient, &sub, trace)?;

        let mut map = vec![0; ext.tree.node_count()];
        for (v, slot) in map.iter_mut().enumerate() {
            *slot = if v == ext.tree.root() {
                attach
            } else {
                parent.push(None);
                parent.len() - 1
            };
        }
        for v in 0..ext.tree.node_count() {
            if let Some(p) = ext.tree.parent(v) {
                parent[map[v]] = Some(map[p]);
            }
        }
        leaf_map.extend(ext.leaf_map.iter().map(|(&e, &v)| (e, map[v])));
        basis_map.extend(ext.basis_map.into_iter().map(|(v, w)| (map[v], w)));
    }

    Ok(ExtendedDepthDecomposition {
        tree: RootedTree::new(parent)?,
        leaf_map,
        basis_map,
    })
}

/// Checks the extended-decomposition invariants: the leaf map covers the
/// ground set with leaves, the node vectors form a basis of the span of all
/// elements, and each element lies in the span of the vectors on its root
/// path. Together these imply the depth-decomposition rank inequality.
pub fn verify_extended(m: &VectorMatroid, e: &ExtendedDepthDecomposition) -> Result<()> {
    let invalid = |s: String| Err(Error::InvalidDecomposition(s));
    let ids: BTreeSet<usize> = m.ids().iter().copied().collect();
    let mapped: BTreeSet<usize> = e.leaf_map.keys().copied().collect();
    if ids != mapped {
        return invalid("leaf map does not cover exactly the ground set".into());
    }
    if let Some((x, v)) = e
        .leaf_map
        .iter()
        .find(|&(_, &v)| v >= e.tree.node_count() || !e.tree.is_leaf(v))
    {
        return invalid(format!("element {x} mapped to non-leaf node {v}"));
    }
    let non_root: BTreeSet<usize> = (0..e.tree.node_count())
        .filter(|&v| v != e.tree.root())
        .collect();
    let keyed: BTreeSet<usize> = e.basis_map.keys().copied().collect();
    if keyed != non_root {
        return invalid("basis map must cover exactly the non-root nodes".into());
    }
    if e.basis_map.values().any(|w| w.len() != m.dim()) {
        return invalid("basis vector has the wrong length".into());
    }
    let rank = m.rank();
    if non_root.len() != rank {
        return invalid(format!(
            "tree has {} edges but the matroid has rank {rank}",
            non_root.len()
        ));
    }
    let image: Vec<Vec<Rat>> = e.basis_map.values().cloned().collect();
    if rank_of_vectors(m.dim(), &image) != image.len() {
        return invalid("basis vectors are linearly dependent".into());
    }
    let hull = m.span_of(m.ids());
    if let Some((v, _)) = e.basis_map.iter().find(|(_, w)| !hull.contains(w)) {
        return invalid(format!("vector at node {v} is outside the span of the elements"));
    }
    for (&x, &leaf) in &e.leaf_map {
        let path: Vec<Vec<Rat>> = e
            .tree
            .path_nodes(leaf)
            .iter()
            .map(|v| e.basis_map[v].clone())
            .collect();
        if !Subspace::span(m.dim(), &path).contains(m.vector(x)) {
            return invalid(format!(
                "element {x} is not spanned by the vectors on its root path"
            ));
        }
    }
    Ok(())
}
