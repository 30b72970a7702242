use super::{is_at_capacity, primary_branches, DepthDecomposition};
use crate::error::{Error, Result};
use crate::matroid::VectorMatroid;
use crate::ratmat::Subspace;

/// Leaf-depth sums observed before each re-rooting move and after the last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepairTrace {
    pub leaf_depth_sums: Vec<usize>,
}

impl RepairTrace {
    pub fn moves(&self) -> usize {
        self.leaf_depth_sums.len().saturating_sub(1)
    }
}

/// Re-roots primary branches that are not at capacity until every primary
/// branch is. Each move hangs the branch's child from the grandparent, so the
/// depth never grows and the leaf-depth sum strictly drops.
pub fn repair_capacity(m: &VectorMatroid, d: &DepthDecomposition) -> Result<DepthDecomposition> {
    repair_capacity_traced(m, d).map(|(d, _)| d)
}

pub fn repair_capacity_traced(
    m: &VectorMatroid,
    d: &DepthDecomposition,
) -> Result<(DepthDecomposition, RepairTrace)> {
    let mut current = d.clone();
    let mut trace = RepairTrace {
        leaf_depth_sums: vec![current.tree.leaf_depth_sum()],
    };
    loop {
        let branches = primary_branches(&current.tree);
        let Some(branch) = branches.iter().find(|b| !is_at_capacity(m, &current, b)) else {
            return Ok((current, trace));
        };
        // Primary branches at the root of a valid decomposition are always at
        // capacity; reaching one here means the input was not valid.
        let Some(grandparent) = current.tree.parent(branch.root) else {
            return Err(Error::InvalidDecomposition(
                "primary branch at the root is below capacity".into(),
            ));
        };
        current.tree = current.tree.reattach(branch.child, grandparent);
        let sum = current.tree.leaf_depth_sum();
        if sum >= *trace.leaf_depth_sums.last().expect("nonempty") {
            return Err(Error::Internal("leaf-depth sum did not decrease".into()));
        }
        trace.leaf_depth_sums.push(sum);
    }
}

/// Common intersection `K` of the spans of the primary branches' element
/// sets. Computed from the first pair and checked against every other pair
/// and against the depth `h` of the branches' common root.
pub fn intersection_subspace(m: &VectorMatroid, d: &DepthDecomposition) -> Result<Subspace> {
    let branches = primary_branches(&d.tree);
    if branches.is_empty() {
        return Err(Error::InvalidDecomposition(
            "a rooted path has no primary branches".into(),
        ));
    }
    if branches.iter().any(|b| !is_at_capacity(m, d, b)) {
        return Err(Error::CapacityViolated);
    }
    let h = d.tree.depth_of(branches[0].root);
    let hulls: Vec<Subspace> = branches
        .iter()
        .map(|b| m.span_of(&d.branch_elements(b)))
        .collect();
    let k = hulls[0].intersection(&hulls[1]);
    if k.dim() != h {
        return Err(Error::IntersectionMismatch(format!(
            "intersection has dimension {} but the branches hang at depth {h}",
            k.dim()
        )));
    }
    for i in 0..hulls.len() {
        for j in i + 1..hulls.len() {
            if (i, j) != (0, 1) && !hulls[i].intersection(&hulls[j]).same_as(&k) {
                return Err(Error::IntersectionMismatch(format!(
                    "branches {i} and {j} intersect differently from branches 0 and 1"
                )));
            }
        }
    }
    Ok(k)
}
