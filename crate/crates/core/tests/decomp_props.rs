mod common;

use rand::Rng;
use tdopt::decomp::{
    branch_depth_exact, check, extend_traced, from_dual_forest, validate, verify_extended, DepthDecomposition,
};
use tdopt::graphs::{dual_graph, treedepth_exact};
use tdopt::matroid::VectorMatroid;
use tdopt::ratmat::Subspace;
use tdopt::Limits;

use common::{
    branch_depth_brute, int_matrix, is_decomposition_by_subsets, random_dfs_forest, random_int_rows, random_low_rank,
    random_regular, random_valid_decomposition, rng,
};

#[test]
fn contraction_rank_identity_exhaustive() {
    let mut r = rng(1);
    for _ in 0..40 {
        let a = random_low_rank(&mut r, 4, 6, 2);
        let m = VectorMatroid::from_columns(&a);
        let k_count = r.gen_range(0..=2);
        let k_rows = random_int_rows(&mut r, k_count, a.rows(), 2);
        let k = if k_rows.is_empty() {
            Subspace::zero(a.rows())
        } else {
            Subspace::span(a.rows(), &int_matrix(&k_rows).to_rows())
        };
        let ids: Vec<usize> = m.ids().to_vec();
        let q = m.contract_to_quotient(&ids, &k).unwrap();
        for mask in 0u32..1 << ids.len() {
            let set: Vec<usize> = (0..ids.len()).filter(|i| mask >> i & 1 == 1).collect();
            let joined = m.span_of(&set).join(&k);
            assert_eq!(q.rank_of(&set), joined.dim() - k.dim());
        }
    }
}

#[test]
fn cached_and_fresh_ranks_agree() {
    let mut r = rng(2);
    for _ in 0..30 {
        let a = random_low_rank(&mut r, 5, 8, 3);
        let m = VectorMatroid::with_cache_capacity(a.rows(), (0..a.cols()).collect(), a.columns(), 4).unwrap();
        for _ in 0..200 {
            let set: Vec<usize> = (0..a.cols()).filter(|_| r.gen_bool(0.5)).collect();
            assert_eq!(m.rank_of(&set), m.rank_uncached(&set));
            assert_eq!(m.rank_of(&set), a.select_cols(&set).rank());
        }
    }
}

#[test]
fn leaf_preimages_suffice() {
    let mut r = rng(3);
    let mut accepted = 0;
    let mut rejected = 0;
    for _ in 0..300 {
        let a = random_low_rank(&mut r, 3, 6, 2);
        let m = VectorMatroid::from_columns(&a);
        let nodes = m.rank() + 1;
        let parent = (0..nodes).map(|i| (i > 0).then(|| r.gen_range(0..i))).collect();
        let tree = tdopt::decomp::RootedTree::new(parent).unwrap();
        let leaves = tree.leaves();
        let leaf_map = m.ids().iter().map(|&e| (e, leaves[r.gen_range(0..leaves.len())])).collect();
        let d = DepthDecomposition { tree, leaf_map };
        let fast = validate(&m, &d, 20).unwrap();
        assert_eq!(fast, is_decomposition_by_subsets(&m, &d));
        if fast {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    assert!(accepted > 20 && rejected > 20, "{accepted} / {rejected}");
}

#[test]
fn exact_search_matches_unpruned_enumeration() {
    let mut r = rng(4);
    for _ in 0..60 {
        let a = random_low_rank(&mut r, 3, 5, 2);
        let m = VectorMatroid::from_columns(&a);
        let (bd, d) = branch_depth_exact(&m, &Limits::default()).unwrap();
        assert_eq!(bd, branch_depth_brute(&m), "{a:?}");
        assert!(is_decomposition_by_subsets(&m, &d));
    }
}

#[test]
fn bounded_by_dual_treedepth_and_row_invariant() {
    let mut r = rng(5);
    for _ in 0..60 {
        let a = random_low_rank(&mut r, 4, 7, 3);
        let bd = branch_depth_exact(&VectorMatroid::from_columns(&a), &Limits::default()).unwrap().0;
        let td = treedepth_exact(&dual_graph(&a), 20).unwrap().0;
        assert!(bd <= td);
        let ra = random_regular(&mut r, a.rows()).mul(&a).unwrap();
        let bd_ra = branch_depth_exact(&VectorMatroid::from_columns(&ra), &Limits::default()).unwrap().0;
        assert_eq!(bd, bd_ra);
    }
}

#[test]
fn dual_forests_give_valid_decompositions_that_extend() {
    let mut r = rng(6);
    for _ in 0..80 {
        let a = random_low_rank(&mut r, 4, 7, 3);
        let kept = a.independent_rows();
        let a = a.select_rows(&kept);
        let m = VectorMatroid::from_columns(&a);
        let f = random_dfs_forest(&mut r, &dual_graph(&a));
        let d = from_dual_forest(&a, &f).unwrap();
        assert!(d.depth() <= f.height());
        check(&m, &d, 20).unwrap();
        let (e, trace) = extend_traced(&m, &d).unwrap();
        verify_extended(&m, &e).unwrap();
        assert!(e.depth() <= d.depth());
        assert!(!trace.steps.is_empty());
    }
}

#[test]
fn random_decompositions_extend() {
    let mut r = rng(7);
    let mut seen = 0;
    for _ in 0..150 {
        let a = random_low_rank(&mut r, 4, 7, 2);
        let m = VectorMatroid::from_columns(&a);
        let Some(d) = random_valid_decomposition(&mut r, &m, 40) else { continue };
        seen += 1;
        let (e, _) = extend_traced(&m, &d).unwrap();
        verify_extended(&m, &e).unwrap();
        assert!(e.depth() <= d.depth());
    }
    assert!(seen > 50, "only {seen} random decompositions accepted");
}
