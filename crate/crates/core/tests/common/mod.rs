//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdopt::decomp::{check, DepthDecomposition, RootedTree};
use tdopt::graphs::{RootedForest, SimpleGraph};
use tdopt::matroid::VectorMatroid;
use tdopt::ratmat::{frac, rat, Rat, RatMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_matrix(rows: &[Vec<i64>]) -> RatMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RatMatrix::from_i64(&refs)
}

/// `m x n` integer matrix with entries in `[-bound, bound]`, biased towards
/// zero so that dual graphs are not always complete.
pub fn random_int_rows(r: &mut impl Rng, m: usize, n: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| {
            (0..n)
                .map(|_| if r.gen_bool(0.4) { 0 } else { r.gen_range(-bound..=bound) })
                .collect()
        })
        .collect()
}

/// Random integer matrix of rank at most `max_rank`: `k ≤ max_rank` random
/// rows, then possibly a few integer combinations of them, shuffled.
pub fn random_low_rank(r: &mut impl Rng, max_rank: usize, max_cols: usize, bound: i64) -> RatMatrix {
    let k = r.gen_range(1..=max_rank);
    let n = r.gen_range(1..=max_cols);
    let mut rows = random_int_rows(r, k, n, bound);
    for _ in 0..r.gen_range(0..=1) {
        let (i, j) = (r.gen_range(0..k), r.gen_range(0..k));
        let (a, b) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let row: Vec<i64> = (0..n).map(|c| a * rows[i][c] + b * rows[j][c]).collect();
        if row.iter().all(|v| v.abs() <= bound) {
            rows.push(row);
        }
    }
    rows.shuffle(r);
    int_matrix(&rows)
}

/// Random regular matrix with small rational entries: a product of a random
/// unit lower and a random unit upper triangular matrix with a random
/// permutation and nonzero diagonal scaling.
pub fn random_regular(r: &mut impl Rng, n: usize) -> RatMatrix {
    let small = |r: &mut dyn rand::RngCore| -> Rat {
        let num = r.gen_range(-3i64..=3);
        let den = r.gen_range(1i64..=3);
        frac(num, den)
    };
    let mut l = RatMatrix::identity(n);
    let mut u = RatMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, small(r));
            u.set(j, i, small(r));
        }
        let mut d = small(r);
        while d == rat(0) {
            d = small(r);
        }
        u.set(i, i, d);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let p = RatMatrix::identity(n).select_rows(&perm);
    p.mul(&l).unwrap().mul(&u).unwrap()
}

/// The introductory example: an all-ones first row, then row `i` equal to
/// ones with a 2 in column `i - 1`.
pub fn worked_example(m: usize) -> RatMatrix {
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| if i > 0 && j == i - 1 { 2 } else { 1 }).collect())
        .collect();
    int_matrix(&rows)
}

// ---- oracles ----------------------------------------------------------------

/// Rank of an integer matrix by fraction-free (Bareiss) elimination in i128.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m {
            for j in col + 1..n {
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    rank
}

/// Tree-depth by trying every parent function on at most 7 vertices.
pub fn treedepth_by_forests(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 7, "oracle is exhaustive");
    if n == 0 {
        return 0;
    }
    let mut best = n;
    let mut code = vec![0usize; n];
    // Each vertex's parent is a vertex index or n for "root".
    loop {
        let parent: Vec<Option<usize>> = code.iter().map(|&c| (c < n).then_some(c)).collect();
        if let Ok(f) = RootedForest::new(parent) {
            if f.height() < best && g.edges().iter().all(|&(u, v)| f.are_related(u, v)) {
                best = f.height();
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            code[i] += 1;
            if code[i] <= n {
                break;
            }
            code[i] = 0;
            i += 1;
        }
    }
}

/// Depth-decomposition check straight from the definition: every subset of
/// elements, not only leaf preimages.
pub fn is_decomposition_by_subsets(m: &VectorMatroid, d: &DepthDecomposition) -> bool {
    let ids = m.ids();
    if d.tree.edge_count() != m.rank() || ids.iter().any(|e| !d.leaf_map.contains_key(e)) {
        return false;
    }
    if d.leaf_map.values().any(|&v| !d.tree.is_leaf(v)) {
        return false;
    }
    (1u32..1 << ids.len()).all(|mask| {
        let set: Vec<usize> = (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
        let leaves: Vec<usize> = set.iter().map(|e| d.leaf_map[e]).collect();
        m.rank_of(&set) <= d.tree.union_path_edges(&leaves)
    })
}

/// Every rooted tree on `nodes` labelled nodes given by parent functions
/// with `parent(i) < i`: covers all shapes up to isomorphism.
pub fn ordered_trees(nodes: usize) -> Vec<RootedTree> {
    let mut out = Vec::new();
    let mut parent = vec![None; nodes];
    fn rec(i: usize, parent: &mut Vec<Option<usize>>, out: &mut Vec<RootedTree>) {
        if i == parent.len() {
            out.push(RootedTree::new(parent.clone()).unwrap());
            return;
        }
        for p in 0..i {
            parent[i] = Some(p);
            rec(i + 1, parent, out);
        }
    }
    if nodes > 0 {
        rec(1, &mut parent, &mut out);
    }
    out
}

/// Branch-depth by exhaustive search over labelled trees and all leaf maps,
/// without any pruning or symmetry breaking.
pub fn branch_depth_brute(m: &VectorMatroid) -> usize {
    let rank = m.rank();
    if rank == 0 {
        return 0;
    }
    let ids = m.ids().to_vec();
    let mut best = usize::MAX;
    for tree in ordered_trees(rank + 1) {
        if tree.depth() >= best {
            continue;
        }
        let leaves = tree.leaves();
        let mut choice = vec![0usize; ids.len()];
        loop {
            let leaf_map: BTreeMap<usize, usize> =
                ids.iter().zip(&choice).map(|(&e, &c)| (e, leaves[c])).collect();
            let d = DepthDecomposition {
                tree: tree.clone(),
                leaf_map,
            };
            if is_decomposition_by_subsets(m, &d) {
                best = best.min(tree.depth());
                break;
            }
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < leaves.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    best
}

/// Random DFS forest of `g`: every edge joins an ancestor and a descendant,
/// so it witnesses an upper bound on tree-depth.
pub fn random_dfs_forest(r: &mut impl Rng, g: &SimpleGraph) -> RootedForest {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    fn visit(v: usize, g: &SimpleGraph, r: &mut dyn rand::RngCore, seen: &mut [bool], parent: &mut [Option<usize>]) {
        seen[v] = true;
        let mut nb: Vec<usize> = g.neighbors(v).collect();
        nb.shuffle(r);
        for w in nb {
            if !seen[w] {
                parent[w] = Some(v);
                visit(w, g, r, seen, parent);
            }
        }
    }
    for &s in &order {
        if !seen[s] {
            visit(s, g, r, &mut seen, &mut parent);
        }
    }
    RootedForest::new(parent).unwrap()
}

/// Random tree on `nodes` nodes and random leaf map, retried until `check`
/// accepts it; `None` if no valid one turned up.
pub fn random_valid_decomposition(r: &mut impl Rng, m: &VectorMatroid, tries: usize) -> Option<DepthDecomposition> {
    let nodes = m.rank() + 1;
    for _ in 0..tries {
        let parent: Vec<Option<usize>> = (0..nodes).map(|i| (i > 0).then(|| r.gen_range(0..i))).collect();
        let tree = RootedTree::new(parent).unwrap();
        let leaves = tree.leaves();
        let leaf_map = m.ids().iter().map(|&e| (e, *leaves.choose(r).unwrap())).collect();
        let d = DepthDecomposition { tree, leaf_map };
        if check(m, &d, 20).is_ok() {
            return Some(d);
        }
    }
    None
}

/// All elements on the single leaf of a rooted path.
pub fn path_decomposition(m: &VectorMatroid) -> DepthDecomposition {
    let rank = m.rank();
    DepthDecomposition {
        tree: RootedTree::path(rank),
        leaf_map: m.ids().iter().map(|&e| (e, rank)).collect(),
    }
}

/// Integer points `x` in `[lo, hi]^n` with `A x = b`, in lexicographic order.
pub fn enumerate_solutions(a: &RatMatrix, b: &[Rat], lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let n = a.cols();
    let mut out = Vec::new();
    let mut x = vec![lo; n];
    loop {
        let xr: Vec<Rat> = x.iter().map(|&v| rat(v)).collect();
        if a.mul_vec(&xr).unwrap() == b {
            out.push(x.clone());
        }
        let Some(i) = (0..n).rev().find(|&i| x[i] < hi) else {
            return out;
        };
        x[i] += 1;
        for v in x.iter_mut().skip(i + 1) {
            *v = lo;
        }
    }
}
