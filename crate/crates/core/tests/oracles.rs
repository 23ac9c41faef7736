//! Library results against brute-force oracles written from the definitions.

use crosslab::arrangement::{induced_boundary_order, planarize, FaceRef};
use crosslab::constructions::{blazek_koman, blazek_koman_layout, crossings_two_page, harary_hill, Page};
use crosslab::goodness::crossing_count;
use crosslab::kedges::{spectrum, zeta};
use crosslab::{ClassTag, Drawing, Point, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    let (a, b, c) = ((a.0 as i128, a.1 as i128), (b.0 as i128, b.1 as i128), (c.0 as i128, c.1 as i128));
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Integer points with no three collinear.
fn general_position(n: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<(i64, i64)> = Vec::new();
    while pts.len() < n {
        let p = (rng.random_range(-50..50), rng.random_range(-50..50));
        let ok = !pts.contains(&p)
            && pts.iter().enumerate().all(|(i, a)| pts[i + 1..].iter().all(|b| orient(*a, *b, p) != 0));
        if ok {
            pts.push(p);
        }
    }
    pts
}

fn straight(pts: &[(i64, i64)]) -> Drawing {
    Drawing::straight(
        ClassTag::Generic,
        pts.iter()
            .enumerate()
            .map(|(i, &(x, y))| (VertexId(i as u32 + 1), Point::from_ints(x, y)))
            .collect(),
    )
    .unwrap()
}

fn oracle_crossings(pts: &[(i64, i64)]) -> u64 {
    let n = pts.len();
    let mut c = 0;
    for a in 0..n {
        for b in a + 1..n {
            for x in 0..n {
                for y in x + 1..n {
                    if [a, b].contains(&x) || [a, b].contains(&y) || (a, b) >= (x, y) {
                        continue;
                    }
                    let s1 = orient(pts[a], pts[b], pts[x]).signum() * orient(pts[a], pts[b], pts[y]).signum();
                    let s2 = orient(pts[x], pts[y], pts[a]).signum() * orient(pts[x], pts[y], pts[b]).signum();
                    if s1 < 0 && s2 < 0 {
                        c += 1;
                    }
                }
            }
        }
    }
    c
}

fn oracle_spectrum(pts: &[(i64, i64)]) -> Vec<u64> {
    let n = pts.len();
    let mut counts = vec![0; n / 2];
    for a in 0..n {
        for b in a + 1..n {
            let left = (0..n).filter(|&r| r != a && r != b && orient(pts[a], pts[b], pts[r]) > 0).count();
            counts[left.min(n - 2 - left)] += 1;
        }
    }
    counts.truncate(n / 2);
    counts
}

#[test]
fn straight_line_drawings_match_orientation_oracle() {
    for seed in 0..25 {
        let n = 4 + (seed % 6) as usize;
        let pts = general_position(n, seed);
        let d = straight(&pts);
        assert_eq!(crossing_count(&d).unwrap(), oracle_crossings(&pts), "seed {seed}");
        let spec = spectrum(&d, &FaceRef::Unbounded).unwrap();
        let mut want = oracle_spectrum(&pts);
        want.truncate(spec.counts.len());
        assert_eq!(spec.counts, want, "seed {seed}");
    }
}

/// Interleaving count on each page, straight from the definition.
fn oracle_two_page(n: usize) -> u64 {
    let l = blazek_koman_layout(n).unwrap();
    let pos = |v: VertexId| l.spine.iter().position(|&u| u == v).unwrap();
    let edges: Vec<_> = l.pages.iter().collect();
    let mut c = 0;
    for (i, (e, p)) in edges.iter().enumerate() {
        for (f, q) in &edges[i + 1..] {
            if p != q {
                continue;
            }
            let (a, b) = (pos(e.lo).min(pos(e.hi)), pos(e.lo).max(pos(e.hi)));
            let inside = |v: VertexId| a < pos(v) && pos(v) < b;
            let shared = e.lo == f.lo || e.lo == f.hi || e.hi == f.lo || e.hi == f.hi;
            if !shared && inside(f.lo) != inside(f.hi) {
                c += 1;
            }
        }
    }
    c
}

#[test]
fn constructions_reach_zeta() {
    for n in 3..=12 {
        assert_eq!(oracle_two_page(n), zeta(n as u64));
        assert_eq!(crossings_two_page(&blazek_koman_layout(n).unwrap()), zeta(n as u64));
    }
    assert_eq!(crossing_count(&harary_hill(8).unwrap().1).unwrap(), 18);
}

#[test]
fn page_rule_examples() {
    // Edge {i, j} is on top iff (2(i + j - 2) + 1) mod 2n > n.
    let l = blazek_koman_layout(6).unwrap();
    for (e, p) in &l.pages {
        let (i, j) = (e.lo.0 as usize, e.hi.0 as usize);
        let top = (2 * (i + j - 2) + 1) % 12 > 6;
        assert_eq!(*p == Page::Top, top, "{e}");
    }
    assert_eq!(l.pages[&crosslab::EdgeKey::of(1, 4)], Page::Top);
    assert_eq!(l.pages[&crosslab::EdgeKey::of(1, 2)], Page::Bottom);
}

#[test]
fn induced_order_from_spine_end() {
    // Bottom-page neighbours by decreasing spine position, then top-page ones increasing.
    let (_, d) = blazek_koman(6).unwrap();
    let order = induced_boundary_order(&d, VertexId(1), &FaceRef::Unbounded).unwrap();
    assert_eq!(order, [3, 2, 4, 5, 6].map(VertexId).to_vec());
}

#[test]
fn arrangement_euler_on_constructions() {
    for n in 3..=9 {
        let (_, d) = blazek_koman(n).unwrap();
        let a = planarize(&d).unwrap();
        assert_eq!(a.euler_characteristic(), 2);
        // Faces of a connected planarization: 1 + E' - V' with E' = C(n,2) + 2X, V' = n + X.
        let x = zeta(n as u64) as usize;
        assert_eq!(a.face_count(), 2 + (n * (n - 1) / 2 + 2 * x) - (n + x));
    }
}
