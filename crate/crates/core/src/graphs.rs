//! Primal and dual graphs of a matrix, rooted forests, and exact tree-depth.
//!
//! Tree-depth uses the height convention throughout: a forest of isolated
//! roots has height 1, and the empty graph on zero vertices has tree-depth 0.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratmat::RatMatrix;

/// Hard ceiling for the bitmask-based exact solver.
pub const EXACT_VERTEX_CEILING: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Adds `{u, v}`; self-loops and duplicates are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_subgraph_of(&self, other: &SimpleGraph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Edge list text, one `u v` pair per line, 0-indexed.
    pub fn to_edge_list(&self) -> String {
        self.edges()
            .iter()
            .map(|(u, v)| format!("{u} {v}\n"))
            .collect()
    }

    fn masks(&self) -> Vec<u64> {
        self.adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }
}

/// Columns are vertices; `{i, j}` is an edge when some row is nonzero in both.
pub fn primal_graph(a: &RatMatrix) -> SimpleGraph {
    let mut g = SimpleGraph::new(a.cols());
    for i in 0..a.rows() {
        let support: Vec<usize> = (0..a.cols()).filter(|&j| !a.get(i, j).is_zero()).collect();
        for (k, &u) in support.iter().enumerate() {
            for &v in &support[k + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Rows are vertices; equals the primal graph of the transpose.
pub fn dual_graph(a: &RatMatrix) -> SimpleGraph {
    primal_graph(&a.transpose())
}

/// A rooted forest on vertices `0..n`; `parent[v]` is `None` for roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
}

impl RootedForest {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if parent.iter().flatten().any(|&p| p >= n) {
            return Err(Error::WitnessInvalid("parent index out of range".into()));
        }
        // Every upward walk must reach a root within n steps.
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::WitnessInvalid(format!("cycle through vertex {v}")));
                }
            }
        }
        Ok(RootedForest { parent })
    }

    pub fn isolated(n: usize) -> Self {
        RootedForest {
            parent: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(v)).collect()
    }

    /// Number of vertices on the path from `v` up to its root.
    pub fn level(&self, v: usize) -> usize {
        let mut cur = v;
        let mut count = 1;
        while let Some(p) = self.parent[cur] {
            cur = p;
            count += 1;
        }
        count
    }

    /// Maximum number of vertices on a root-to-leaf path; 0 for the empty forest.
    pub fn height(&self) -> usize {
        (0..self.len()).map(|v| self.level(v)).max().unwrap_or(0)
    }

    pub fn is_ancestor(&self, a: usize, d: usize) -> bool {
        let mut cur = d;
        while let Some(p) = self.parent[cur] {
            if p == a {
                return true;
            }
            cur = p;
        }
        false
    }

    pub fn are_related(&self, u: usize, v: usize) -> bool {
        u == v || self.is_ancestor(u, v) || self.is_ancestor(v, u)
    }

    /// Adds an edge from every vertex to each of its descendants.
    pub fn closure(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.len());
        for v in 0..self.len() {
            let mut cur = v;
            while let Some(p) = self.parent[cur] {
                g.add_edge(p, v);
                cur = p;
            }
        }
        g
    }
}

pub fn closure(f: &RootedForest) -> SimpleGraph {
    f.closure()
}

/// True iff both have the same vertex set and every edge of `g` joins an
/// ancestor-descendant pair of `f`.
pub fn verify_td_witness(g: &SimpleGraph, f: &RootedForest) -> bool {
    g.vertex_count() == f.len() && g.edges().iter().all(|&(u, v)| f.are_related(u, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDepth {
    pub value: usize,
    pub forest: RootedForest,
    /// False when the value is only the height of a greedy elimination forest.
    pub exact: bool,
}

/// Exact tree-depth with a witness forest, for graphs up to `max_vertices`.
pub fn treedepth_exact(g: &SimpleGraph, max_vertices: usize) -> Result<(usize, RootedForest)> {
    let n = g.vertex_count();
    let limit = max_vertices.min(EXACT_VERTEX_CEILING);
    if n > limit {
        return Err(Error::SizeLimit {
            what: "graph vertices",
            actual: n,
            limit,
        });
    }
    let mut solver = ExactSolver {
        adj: g.masks(),
        memo: HashMap::new(),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let value = solver.td(all) as usize;
    let mut parent = vec![None; n];
    solver.build(all, None, &mut parent);
    let forest = RootedForest { parent };
    debug_assert_eq!(forest.height(), value);
    Ok((value, forest))
}

/// Exact tree-depth when `g` fits under `max_vertices`, else the height of a
/// greedy max-degree elimination forest (an upper bound).
pub fn treedepth(g: &SimpleGraph, max_vertices: usize) -> TreeDepth {
    match treedepth_exact(g, max_vertices) {
        Ok((value, forest)) => TreeDepth {
            value,
            forest,
            exact: true,
        },
        Err(_) => {
            let forest = greedy_forest(g);
            TreeDepth {
                value: forest.height(),
                forest,
                exact: false,
            }
        }
    }
}

struct ExactSolver {
    adj: Vec<u64>,
    memo: HashMap<u64, u32>,
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}

impl ExactSolver {
    fn components(&self, set: u64) -> Vec<u64> {
        let mut rest = set;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                next &= set & !comp;
                comp |= next;
                frontier = next;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    fn td(&mut self, set: u64) -> u32 {
        if set == 0 {
            return 0;
        }
        let comps = self.components(set);
        if comps.len() > 1 {
            return comps.into_iter().map(|c| self.td_connected(c)).max().unwrap_or(0);
        }
        self.td_connected(set)
    }

    fn td_connected(&mut self, set: u64) -> u32 {
        let size = set.count_ones();
        if size <= 2 {
            return size;
        }
        if let Some(&v) = self.memo.get(&set) {
            return v;
        }
        // Any connected graph with an edge needs height 2.
        let lower = 2;
        let mut best = size;
        for v in bits(set) {
            let val = 1 + self.td(set & !(1 << v));
            if val < best {
                best = val;
                if best == lower {
                    break;
                }
            }
        }
        self.memo.insert(set, best);
        best
    }

    /// Chooses the lowest-index root achieving the optimum in every component.
    fn build(&mut self, set: u64, parent_of_roots: Option<usize>, parent: &mut [Option<usize>]) {
        for comp in self.components(set) {
            let target = self.td_connected(comp);
            let root = bits(comp)
                .find(|&v| 1 + self.td(comp & !(1 << v)) == target)
                .expect("optimal root exists");
            parent[root] = parent_of_roots;
            self.build(comp & !(1 << root), Some(root), parent);
        }
    }
}

fn greedy_forest(g: &SimpleGraph) -> RootedForest {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut stack: Vec<(BTreeSet<usize>, Option<usize>)> = vec![((0..n).collect(), None)];
    while let Some((set, above)) = stack.pop() {
        for comp in components_of(g, &set) {
            let root = *comp
                .iter()
                .max_by_key(|&&v| {
                    let d = g.neighbors(v).filter(|u| comp.contains(u)).count();
                    (d, std::cmp::Reverse(v))
                })
                .expect("nonempty component");
            parent[root] = above;
            let mut rest = comp;
            rest.remove(&root);
            if !rest.is_empty() {
                stack.push((rest, Some(root)));
            }
        }
    }
    RootedForest { parent }
}

fn components_of(g: &SimpleGraph, set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in set {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if set.contains(&u) && comp.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}
