use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A rooted tree on nodes `0..n`. Depth counts edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    root: usize,
}

impl RootedTree {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let roots: Vec<usize> = (0..parent.len()).filter(|&v| parent[v].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::InvalidDecomposition(format!(
                "tree must have exactly one root, found {}",
                roots.len()
            )));
        };
        let n = parent.len();
        if parent.iter().flatten().any(|&p| p >= n) {
            return Err(Error::InvalidDecomposition("parent index out of range".into()));
        }
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidDecomposition(format!("cycle through node {v}")));
                }
            }
        }
        Ok(RootedTree { parent, root })
    }

    pub fn single_node() -> Self {
        RootedTree {
            parent: vec![None],
            root: 0,
        }
    }

    /// Rooted path `0 → 1 → … → edges`.
    pub fn path(edges: usize) -> Self {
        let parent = (0..=edges).map(|v| v.checked_sub(1)).collect();
        RootedTree { parent, root: 0 }
    }

    /// Root `0` with leaf children `1..=k`.
    pub fn star(k: usize) -> Self {
        let parent = (0..=k).map(|v| if v == 0 { None } else { Some(0) }).collect();
        RootedTree { parent, root: 0 }
    }

    /// Tree from a level sequence in preorder (root at level 0); the parent of
    /// node `i` is the last earlier node one level up.
    pub fn from_levels(levels: &[usize]) -> Result<Self> {
        if levels.first() != Some(&0) || levels[1..].contains(&0) {
            return Err(Error::InvalidDecomposition("bad level sequence".into()));
        }
        let mut parent = vec![None; levels.len()];
        for i in 1..levels.len() {
            let p = (0..i)
                .rev()
                .find(|&j| levels[j] + 1 == levels[i])
                .ok_or_else(|| Error::InvalidDecomposition("bad level sequence".into()))?;
            parent[i] = Some(p);
        }
        RootedTree::new(parent)
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&c| self.parent[c] == Some(v))
            .collect()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        !self.parent.contains(&Some(v))
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Edges from the root down to `v`.
    pub fn depth_of(&self, v: usize) -> usize {
        self.path_nodes(v).len()
    }

    pub fn depth(&self) -> usize {
        (0..self.node_count()).map(|v| self.depth_of(v)).max().unwrap_or(0)
    }

    /// Non-root nodes on the path from `v` up to the root, starting at `v`.
    /// Each stands for the edge to its parent.
    pub fn path_nodes(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(cur);
            cur = p;
        }
        out
    }

    /// Number of edges in the union of root paths to `nodes`.
    pub fn union_path_edges(&self, nodes: &[usize]) -> usize {
        let set: BTreeSet<usize> = nodes.iter().flat_map(|&v| self.path_nodes(v)).collect();
        set.len()
    }

    pub fn is_ancestor_or_self(&self, a: usize, d: usize) -> bool {
        let mut cur = d;
        loop {
            if cur == a {
                return true;
            }
            match self.parent[cur] {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// `v` and all of its descendants, in preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            let mut ch = self.children(x);
            ch.reverse();
            stack.extend(ch);
        }
        out
    }

    /// Preorder from the root, children visited in increasing index order.
    pub fn preorder(&self) -> Vec<usize> {
        self.subtree(self.root)
    }

    pub fn is_path(&self) -> bool {
        (0..self.node_count()).all(|v| self.children(v).len() <= 1)
    }

    /// Sum over leaves of their depth.
    pub fn leaf_depth_sum(&self) -> usize {
        self.leaves().iter().map(|&l| self.depth_of(l)).sum()
    }

    /// Same tree with `v` re-attached under `new_parent`.
    pub(crate) fn reattach(&self, v: usize, new_parent: usize) -> RootedTree {
        let mut parent = self.parent.clone();
        parent[v] = Some(new_parent);
        RootedTree {
            parent,
            root: self.root,
        }
    }

    /// Canonical string of the unordered rooted tree, with `marked` nodes
    /// distinguished. Two leaves lie in the same automorphism orbit iff the
    /// encodings with each one marked coincide.
    pub fn canonical_encoding(&self, marked: &[usize]) -> String {
        self.encode(self.root, marked)
    }

    fn encode(&self, v: usize, marked: &[usize]) -> String {
        let mut parts: Vec<String> = self
            .children(v)
            .into_iter()
            .map(|c| self.encode(c, marked))
            .collect();
        parts.sort();
        let mark = if marked.contains(&v) { "*" } else { "" };
        format!("({mark}{})", parts.concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_shapes() {
        let p = RootedTree::path(3);
        assert_eq!(p.depth(), 3);
        assert!(p.is_path());
        assert_eq!(p.leaves(), vec![3]);
        let s = RootedTree::star(3);
        assert_eq!(s.depth(), 1);
        assert!(!s.is_path());
        assert_eq!(s.leaf_depth_sum(), 3);
        assert!(RootedTree::single_node().is_path());
        assert_eq!(RootedTree::single_node().leaves(), vec![0]);
    }

    #[test]
    fn levels_round_trip() {
        let t = RootedTree::from_levels(&[0, 1, 2, 2, 1]).unwrap();
        assert_eq!(t.parents(), &[None, Some(0), Some(1), Some(1), Some(0)]);
        assert_eq!(t.union_path_edges(&[2, 3]), 3);
        assert_eq!(t.union_path_edges(&[2, 4]), 3);
        assert!(RootedTree::from_levels(&[0, 2]).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(RootedTree::new(vec![None, None]).is_err());
        assert!(RootedTree::new(vec![Some(1), Some(0)]).is_err());
    }

    #[test]
    fn encoding_identifies_symmetric_leaves() {
        // root → a → {l1, l2}, root → l3
        let t = RootedTree::new(vec![None, Some(0), Some(1), Some(1), Some(0)]).unwrap();
        assert_eq!(t.canonical_encoding(&[2]), t.canonical_encoding(&[3]));
        assert_ne!(t.canonical_encoding(&[2]), t.canonical_encoding(&[4]));
    }
}
