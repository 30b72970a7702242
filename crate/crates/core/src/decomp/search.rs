use std::collections::BTreeMap;

use super::{check, DepthDecomposition, RootedTree};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::matroid::VectorMatroid;

/// Canonical level sequences of all rooted trees on `n` nodes, one per
/// isomorphism class, in the Beyer-Hedetniemi successor order (path first,
/// star last).
pub fn level_sequences(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let mut seq: Vec<usize> = (0..n).collect();
    let mut out = vec![seq.clone()];
    loop {
        let Some(p) = (0..n).rev().find(|&i| seq[i] > 1) else {
            return out;
        };
        let q = (0..p)
            .rev()
            .find(|&j| seq[j] == seq[p] - 1)
            .expect("parent level precedes");
        let shift = p - q;
        for i in p..n {
            seq[i] = seq[i - shift];
        }
        out.push(seq.clone());
    }
}

/// Smallest depth of a depth-decomposition of `m`, with a witness.
///
/// Trees with `rank(m)` edges are tried by increasing depth, one per
/// isomorphism class. Parallel non-loop elements share a leaf without loss of
/// generality, so classes are placed by backtracking and every partial
/// placement is pruned by the rank inequality on leaf sets containing the
/// newest leaf. Loops go to the smallest-index leaf.
pub fn branch_depth_exact(m: &VectorMatroid, limits: &Limits) -> Result<(usize, DepthDecomposition)> {
    let rank = m.rank();
    if rank > limits.max_rank {
        return Err(Error::SizeLimit {
            what: "matroid rank",
            actual: rank,
            limit: limits.max_rank,
        });
    }
    if m.len() > limits.max_elements {
        return Err(Error::SizeLimit {
            what: "matroid elements",
            actual: m.len(),
            limit: limits.max_elements,
        });
    }
    if rank == 0 {
        let d = DepthDecomposition {
            tree: RootedTree::single_node(),
            leaf_map: m.ids().iter().map(|&e| (e, 0)).collect(),
        };
        return Ok((0, d));
    }

    let (classes, loops) = parallel_classes(m);
    let trees: Vec<RootedTree> = level_sequences(rank + 1)
        .iter()
        .map(|l| RootedTree::from_levels(l).expect("valid level sequence"))
        .collect();

    for depth in 1..=rank {
        for tree in trees.iter().filter(|t| t.depth() == depth) {
            let leaves = tree.leaves();
            if leaves.len() > classes.len() {
                continue;
            }
            let mut search = Placement::new(m, tree, &leaves, &classes);
            if let Some(assign) = search.run() {
                let first_leaf = leaves[0];
                let mut leaf_map = BTreeMap::new();
                for (class, &slot) in classes.iter().zip(&assign) {
                    for &e in class {
                        leaf_map.insert(e, leaves[slot]);
                    }
                }
                for &e in &loops {
                    leaf_map.insert(e, first_leaf);
                }
                let d = DepthDecomposition {
                    tree: tree.clone(),
                    leaf_map,
                };
                check(m, &d, 63)?;
                return Ok((depth, d));
            }
        }
    }
    Err(Error::Internal(
        "no decomposition found up to depth = rank; the rooted path always works".into(),
    ))
}

/// Non-loop elements grouped into parallel classes (in ground-set order of
/// first member), and the loops.
fn parallel_classes(m: &VectorMatroid) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut loops = Vec::new();
    for &e in m.ids() {
        if m.rank_of(&[e]) == 0 {
            loops.push(e);
            continue;
        }
        match classes.iter_mut().find(|c| m.rank_of(&[c[0], e]) == 1) {
            Some(c) => c.push(e),
            None => classes.push(vec![e]),
        }
    }
    (classes, loops)
}

struct Placement<'a> {
    m: &'a VectorMatroid,
    classes: &'a [Vec<usize>],
    /// Root-path node masks per leaf slot.
    paths: Vec<u64>,
    /// Leaf slots allowed to host the first class: one per automorphism orbit.
    orbit_reps: Vec<bool>,
    /// Previous leaf slot with the same parent, if any.
    prev_sibling: Vec<Option<usize>>,
    assign: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl<'a> Placement<'a> {
    fn new(
        m: &'a VectorMatroid,
        tree: &RootedTree,
        leaves: &[usize],
        classes: &'a [Vec<usize>],
    ) -> Self {
        let paths = leaves
            .iter()
            .map(|&l| tree.path_nodes(l).iter().fold(0u64, |acc, &v| acc | 1 << v))
            .collect();
        let encodings: Vec<String> = leaves
            .iter()
            .map(|&l| tree.canonical_encoding(&[l]))
            .collect();
        let orbit_reps = (0..leaves.len())
            .map(|i| !encodings[..i].contains(&encodings[i]))
            .collect();
        let prev_sibling = (0..leaves.len())
            .map(|i| {
                (0..i)
                    .rev()
                    .find(|&j| tree.parent(leaves[j]) == tree.parent(leaves[i]))
            })
            .collect();
        Placement {
            m,
            classes,
            paths,
            orbit_reps,
            prev_sibling,
            assign: Vec::with_capacity(classes.len()),
            members: vec![Vec::new(); leaves.len()],
        }
    }

    fn run(&mut self) -> Option<Vec<usize>> {
        if self.place(0) {
            Some(self.assign.clone())
        } else {
            None
        }
    }

    fn place(&mut self, k: usize) -> bool {
        let unused = self.members.iter().filter(|m| m.is_empty()).count();
        if unused > self.classes.len() - k {
            return false;
        }
        if k == self.classes.len() {
            return unused == 0;
        }
        for slot in 0..self.members.len() {
            if k == 0 && !self.orbit_reps[slot] {
                continue;
            }
            // Sibling leaves are interchangeable: open them in index order.
            if self.members[slot].is_empty() {
                if let Some(prev) = self.prev_sibling[slot] {
                    if self.members[prev].is_empty() {
                        continue;
                    }
                }
            }
            self.members[slot].extend_from_slice(&self.classes[k]);
            if self.consistent(slot) {
                self.assign.push(slot);
                if self.place(k + 1) {
                    return true;
                }
                self.assign.pop();
            }
            let len = self.members[slot].len() - self.classes[k].len();
            self.members[slot].truncate(len);
        }
        false
    }

    /// Rank inequality for every set of used leaves containing `slot`.
    fn consistent(&self, slot: usize) -> bool {
        let used: Vec<usize> = (0..self.members.len())
            .filter(|&s| s != slot && !self.members[s].is_empty())
            .collect();
        for mask in 0u64..(1 << used.len()) {
            let mut elems = self.members[slot].clone();
            let mut nodes = self.paths[slot];
            for (i, &s) in used.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    elems.extend_from_slice(&self.members[s]);
                    nodes |= self.paths[s];
                }
            }
            if self.m.rank_of(&elems) > nodes.count_ones() as usize {
                return false;
            }
        }
        true
    }
}
