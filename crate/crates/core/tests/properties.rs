use std::collections::BTreeSet;

use proptest::prelude::*;

use crosslab::arrangement::{planarize, FaceRef};
use crosslab::constructions::{crossings_two_page, random_two_page, realize, Layout, TwoPageLayout, DEFAULT_RESOLUTION};
use crosslab::goodness::crossing_count;
use crosslab::io::drawing_to_string;
use crosslab::kedges::{check_identity2, spectrum};
use crosslab::optimizer::{build_conflict_graph, build_conflict_graph_on, exact_min_crossings, DEFAULT_EXACT_BUDGET};
use crosslab::scalar::int;
use crosslab::{ClassTag, Drawing, VertexId};

fn two_page(n: usize, seed: u64) -> (TwoPageLayout, Drawing) {
    let l = random_two_page(n, seed).unwrap();
    let d = realize(&Layout::TwoPage(l.clone()), DEFAULT_RESOLUTION).unwrap();
    (l, d)
}

/// Exhaustive minimum over page assignments of the conflicting nodes (Gray code).
fn brute_min(spine: &[VertexId]) -> u64 {
    let g = build_conflict_graph_on(spine).unwrap();
    let live: Vec<usize> = (0..g.node_count()).filter(|&u| !g.adj[u].is_empty()).collect();
    let mut bottom = vec![false; g.node_count()];
    let mut best = g.count(&bottom);
    for step in 1u64..(1 << (live.len() - 1)) {
        let u = live[step.trailing_zeros() as usize];
        bottom[u] = !bottom[u];
        best = best.min(g.count(&bottom));
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_maps_preserve_counts(n in 4usize..8, seed in 0u64..1000,
                                   a in 1i64..4, b in -3i64..4, c in -3i64..4, dd in 1i64..4,
                                   e in -9i64..9, f in -9i64..9) {
        prop_assume!(a * dd - b * c != 0);
        let (_, d) = two_page(n, seed);
        let m = [int(a), int(b), int(c), int(dd), int(e), int(f)];
        let t = d.map_points(ClassTag::Generic, |p| p.affine(&m)).unwrap();
        prop_assert_eq!(crossing_count(&t).unwrap(), crossing_count(&d).unwrap());
        // k-edge classes count points on either side, so orientation reversal is harmless.
        prop_assert_eq!(spectrum(&t, &FaceRef::Unbounded).unwrap(), spectrum(&d, &FaceRef::Unbounded).unwrap());
    }

    #[test]
    fn relabeling_preserves_counts(n in 4usize..9, seed in 0u64..1000, shift in 1u32..50) {
        let (_, d) = two_page(n, seed);
        let r = d.relabel(|v| VertexId((v.0 * 7 + shift) % 1000 + 1)).unwrap();
        prop_assert_eq!(crossing_count(&r).unwrap(), crossing_count(&d).unwrap());
        prop_assert_eq!(spectrum(&r, &FaceRef::Unbounded).unwrap(), spectrum(&d, &FaceRef::Unbounded).unwrap());
    }

    #[test]
    fn deletion_commutes(n in 5usize..9, seed in 0u64..1000, x in 1u32..5, y in 1u32..5) {
        prop_assume!(x != y);
        let (_, d) = two_page(n, seed);
        let (x, y) = (VertexId(x), VertexId(y));
        let a = d.delete(&[x]).unwrap().delete(&[y]).unwrap();
        let b = d.delete(&[y]).unwrap().delete(&[x]).unwrap();
        let both = d.delete_vertices(&BTreeSet::from([x, y])).unwrap();
        prop_assert_eq!(drawing_to_string(&a), drawing_to_string(&b));
        prop_assert_eq!(drawing_to_string(&a), drawing_to_string(&both));
        prop_assert_eq!(crossing_count(&a).unwrap(), a.layout().unwrap().crossings().unwrap());
    }

    #[test]
    fn planarization_satisfies_euler(n in 3usize..10, seed in 0u64..1000) {
        let (_, d) = two_page(n, seed);
        let arr = planarize(&d).unwrap();
        prop_assert_eq!(arr.euler_characteristic(), 2);
    }

    #[test]
    fn spine_reversal_is_symmetric(n in 3usize..10, seed in 0u64..1000) {
        let (l, d) = two_page(n, seed);
        let mut rev = l.clone();
        rev.spine.reverse();
        prop_assert_eq!(crossings_two_page(&rev), crossings_two_page(&l));
        let m = [int(-1), int(0), int(0), int(1), int(0), int(0)];
        let mirrored = d.map_points(ClassTag::Generic, |p| p.affine(&m)).unwrap();
        prop_assert_eq!(crossing_count(&mirrored).unwrap(), crossing_count(&d).unwrap());
    }

    #[test]
    fn identity_and_fidelity_on_random_two_page(n in 4usize..10, seed in 0u64..1000) {
        let (l, d) = two_page(n, seed);
        prop_assert_eq!(crossing_count(&d).unwrap(), crossings_two_page(&l));
        prop_assert!(check_identity2(&d).unwrap().equal);
    }

    #[test]
    fn spine_order_is_irrelevant(perm in Just((1..=6u32).collect::<Vec<_>>()).prop_shuffle()) {
        let spine: Vec<VertexId> = perm.into_iter().map(VertexId).collect();
        let g = build_conflict_graph_on(&spine).unwrap();
        prop_assert_eq!(g.conflicts, build_conflict_graph(6).unwrap().conflicts);
        prop_assert_eq!(brute_min(&spine), exact_min_crossings(6, DEFAULT_EXACT_BUDGET).unwrap().count);
    }
}
