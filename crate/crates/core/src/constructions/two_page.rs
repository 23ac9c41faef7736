use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{realize, require_n, Layout, DEFAULT_RESOLUTION};
use crate::drawing::{ClassTag, Drawing, EdgeKey, Polyline, VertexId};
use crate::error::{Error, Result};
use crate::scalar::{int, ratio, Point, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Page {
    Top,
    Bottom,
}

impl Page {
    pub fn as_str(self) -> &'static str {
        match self {
            Page::Top => "top",
            Page::Bottom => "bottom",
        }
    }

    pub fn parse(s: &str) -> Result<Page> {
        match s {
            "top" => Ok(Page::Top),
            "bottom" => Ok(Page::Bottom),
            _ => Err(Error::Parse(format!("unknown page {s:?}"))),
        }
    }

    pub fn flip(self) -> Page {
        match self {
            Page::Top => Page::Bottom,
            Page::Bottom => Page::Top,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPageLayout {
    /// Vertices from left to right.
    pub spine: Vec<VertexId>,
    pub pages: BTreeMap<EdgeKey, Page>,
}

impl TwoPageLayout {
    pub fn new(spine: Vec<VertexId>, pages: BTreeMap<EdgeKey, Page>) -> Result<TwoPageLayout> {
        let l = TwoPageLayout { spine, pages };
        let pos = l.positions();
        if pos.len() != l.spine.len() {
            return Err(Error::Structural("spine repeats a vertex".into()));
        }
        let n = l.spine.len();
        if l.pages.len() != n * (n - 1) / 2 {
            return Err(Error::Structural(format!(
                "two-page layout assigns {} pages, expected {}",
                l.pages.len(),
                n * (n - 1) / 2
            )));
        }
        if let Some(e) = l.pages.keys().find(|e| !pos.contains_key(&e.lo) || !pos.contains_key(&e.hi)) {
            return Err(Error::Structural(format!("page assigned to edge {e} off the spine")));
        }
        Ok(l)
    }

    pub fn positions(&self) -> BTreeMap<VertexId, usize> {
        self.spine.iter().enumerate().map(|(i, v)| (*v, i)).collect()
    }

    pub fn restrict(&self, keep: impl Fn(VertexId) -> bool) -> TwoPageLayout {
        TwoPageLayout {
            spine: self.spine.iter().copied().filter(|v| keep(*v)).collect(),
            pages: self
                .pages
                .iter()
                .filter(|(e, _)| keep(e.lo) && keep(e.hi))
                .map(|(e, p)| (*e, *p))
                .collect(),
        }
    }
}

/// Same-page pairs whose endpoints interleave along the spine.
pub fn crossings_two_page(l: &TwoPageLayout) -> u64 {
    let pos = l.positions();
    let mut total = 0;
    for page in [Page::Top, Page::Bottom] {
        let spans: Vec<(usize, usize)> = l
            .pages
            .iter()
            .filter(|(_, p)| **p == page)
            .map(|(e, _)| {
                let (a, b) = (pos[&e.lo], pos[&e.hi]);
                (a.min(b), a.max(b))
            })
            .collect();
        for (i, &(a, b)) in spans.iter().enumerate() {
            for &(c, d) in &spans[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// Spine = 1..n; a chord {i, j} of the regular n-gon goes on the top page iff
/// its direction class `(2(i + j - 2) + 1) mod 2n` exceeds n. This is the
/// positive-slope rule of the circular picture transported to the spine.
pub fn blazek_koman_layout(n: usize) -> Result<TwoPageLayout> {
    require_n(n, "blazek_koman")?;
    let spine: Vec<VertexId> = (1..=n as u32).map(VertexId).collect();
    let mut pages = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let class = (2 * (i + j - 2) + 1) % (2 * n);
            let page = if class > n { Page::Top } else { Page::Bottom };
            pages.insert(EdgeKey::of(i as u32, j as u32), page);
        }
    }
    TwoPageLayout::new(spine, pages)
}

pub fn blazek_koman(n: usize) -> Result<(TwoPageLayout, Drawing)> {
    let l = blazek_koman_layout(n)?;
    let d = realize(&Layout::TwoPage(l.clone()), DEFAULT_RESOLUTION)?;
    Ok((l, d))
}

/// Identity spine with a fair coin per edge.
pub fn random_two_page(n: usize, seed: u64) -> Result<TwoPageLayout> {
    require_n(n, "random_two_page")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spine: Vec<VertexId> = (1..=n as u32).map(VertexId).collect();
    let mut pages = BTreeMap::new();
    for i in 1..=n as u32 {
        for j in i + 1..=n as u32 {
            let page = if rng.random_bool(0.5) { Page::Top } else { Page::Bottom };
            pages.insert(EdgeKey::of(i, j), page);
        }
    }
    TwoPageLayout::new(spine, pages)
}

/// Spine position i sits at x = i + i^2 / (n^3 + 1); plain integers put
/// three arcs through one point. Edge {a, b} is the graph of
/// `y = +-(x - x_a)(x_b - x)` interpolated on a grid shared by all edges; any
/// two such parabolas differ by a linear function, so the interpolants cross
/// exactly when the parabolas do.
pub fn realize_two_page(l: &TwoPageLayout, resolution: u32) -> Result<Drawing> {
    let n = l.spine.len();
    if n == 0 {
        return Err(Error::Domain("empty spine".into()));
    }
    let res = resolution.max(1) as i64;
    let bump = int(n as i64).pow(3) + int(1);
    let xs: Vec<Scalar> = (1..=n as i64).map(|i| int(i) + int(i * i) / &bump).collect();
    // grid[res * i] = xs[i]
    let mut grid = Vec::with_capacity((n - 1) * res as usize + 1);
    for i in 0..n - 1 {
        for k in 0..res {
            grid.push(&xs[i] + (&xs[i + 1] - &xs[i]) * ratio(k, res));
        }
    }
    grid.push(xs[n - 1].clone());

    let pos = l.positions();
    let vertices: BTreeMap<VertexId, Point> = l
        .spine
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, Point::new(xs[i].clone(), int(0))))
        .collect();
    let mut edges = BTreeMap::new();
    for (e, page) in &l.pages {
        let (a, b) = (pos[&e.lo].min(pos[&e.hi]), pos[&e.lo].max(pos[&e.hi]));
        let (xa, xb) = (&xs[a], &xs[b]);
        let s = if *page == Page::Top { int(1) } else { int(-1) };
        let pts: Vec<Point> = grid[a * res as usize..=b * res as usize]
            .iter()
            .map(|x| Point::new(x.clone(), &s * (x - xa) * (xb - x)))
            .collect();
        edges.insert(*e, Polyline::new(pts)?);
    }
    Drawing::new(ClassTag::TwoPage, vertices, edges, Some(Layout::TwoPage(l.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::is_monotone;
    use crate::goodness::{crossing_count, validate_good_drawing};
    use crate::kedges::zeta;

    fn layout(n: u32, top: &[(u32, u32)]) -> TwoPageLayout {
        let mut pages = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let p = if top.contains(&(i, j)) { Page::Top } else { Page::Bottom };
                pages.insert(EdgeKey::of(i, j), p);
            }
        }
        TwoPageLayout::new((1..=n).map(VertexId).collect(), pages).unwrap()
    }

    #[test]
    fn interleaving_rule() {
        let l = layout(4, &[(1, 3), (2, 4)]);
        assert_eq!(crossings_two_page(&l), 1);
        let all: Vec<(u32, u32)> = (1..=5).flat_map(|i| (i + 1..=5).map(move |j| (i, j))).collect();
        assert_eq!(crossings_two_page(&layout(5, &all)), 5);
        assert_eq!(crossings_two_page(&layout(3, &[(1, 3)])), 0);
    }

    #[test]
    fn blazek_koman_hits_zeta() {
        assert!(blazek_koman(2).is_err());
        for n in 3..=10 {
            let (l, d) = blazek_koman(n).unwrap();
            assert_eq!(crossings_two_page(&l), zeta(n as u64), "n={n}");
            assert_eq!(crossing_count(&d).unwrap(), zeta(n as u64), "n={n}");
            assert!(is_monotone(&d).unwrap());
        }
    }

    #[test]
    fn random_layouts_realize_faithfully() {
        for seed in 0..6 {
            let l = random_two_page(8, seed).unwrap();
            assert_eq!(l, random_two_page(8, seed).unwrap());
            let d = realize_two_page(&l, 2).unwrap();
            assert!(validate_good_drawing(&d).is_good());
            assert_eq!(crossing_count(&d).unwrap(), crossings_two_page(&l));
        }
    }

    #[test]
    fn layout_validation() {
        let mut l = layout(4, &[]);
        l.pages.remove(&EdgeKey::of(1, 2));
        assert!(TwoPageLayout::new(l.spine.clone(), l.pages.clone()).is_err());
        let l = layout(3, &[]);
        let spine = vec![VertexId(1), VertexId(1), VertexId(2)];
        assert!(TwoPageLayout::new(spine, l.pages).is_err());
    }
}
