use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, ToPrimitive};

use super::{realize, require_n, Layout, DEFAULT_RESOLUTION};
use crate::drawing::{ClassTag, Drawing, EdgeKey, Polyline, VertexId};
use crate::error::{Error, Result};
use crate::geom::cmp_angle;
use crate::scalar::{int, ratio, to_f64, Point, Scalar};

/// Exact angle in full turns.
pub type Turn = Scalar;

fn frac(t: &Turn) -> Turn {
    t - Scalar::from_integer(t.floor().to_integer())
}

/// Representative of `t` mod 1 in (-1/2, 1/2].
fn geodesic(t: &Turn) -> Turn {
    let f = frac(t);
    if f > ratio(1, 2) {
        f - int(1)
    } else {
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylindricalLayout {
    /// Inner-circle vertices with their positions, sorted by position.
    pub inner: Vec<(VertexId, Turn)>,
    pub outer: Vec<(VertexId, Turn)>,
    /// Total angular change of each inner-outer edge, from its inner end to its outer end.
    pub delta: BTreeMap<EdgeKey, Turn>,
}

impl CylindricalLayout {
    pub fn new(
        inner: Vec<(VertexId, Turn)>,
        outer: Vec<(VertexId, Turn)>,
        delta: BTreeMap<EdgeKey, Turn>,
    ) -> Result<CylindricalLayout> {
        let mut seen = BTreeSet::new();
        for (v, _) in inner.iter().chain(&outer) {
            if !seen.insert(*v) {
                return Err(Error::Structural(format!("vertex {v} placed twice")));
            }
        }
        let mut inner: Vec<(VertexId, Turn)> = inner.into_iter().map(|(v, t)| (v, frac(&t))).collect();
        let mut outer: Vec<(VertexId, Turn)> = outer.into_iter().map(|(v, t)| (v, frac(&t))).collect();
        for circle in [&mut inner, &mut outer] {
            circle.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
            if circle.windows(2).any(|w| w[0].1 == w[1].1) {
                return Err(Error::Structural("two vertices share a circle position".into()));
            }
        }
        let inner_pos: BTreeMap<VertexId, Turn> = inner.iter().cloned().collect();
        let outer_pos: BTreeMap<VertexId, Turn> = outer.iter().cloned().collect();
        for (e, d) in &delta {
            let (u, v) = match (inner_pos.get(&e.lo), outer_pos.get(&e.hi), inner_pos.get(&e.hi), outer_pos.get(&e.lo)) {
                (Some(_), Some(_), _, _) => (e.lo, e.hi),
                (_, _, Some(_), Some(_)) => (e.hi, e.lo),
                _ => {
                    return Err(Error::Structural(format!(
                        "edge {e} has a displacement but does not join the two circles"
                    )))
                }
            };
            if frac(&(&inner_pos[&u] + d)) != outer_pos[&v] {
                return Err(Error::Structural(format!(
                    "displacement of edge {e} does not end at its outer vertex"
                )));
            }
        }
        if delta.len() != inner.len() * outer.len() {
            return Err(Error::Structural(format!(
                "{} inner-outer edges need displacements, found {}",
                inner.len() * outer.len(),
                delta.len()
            )));
        }
        Ok(CylindricalLayout { inner, outer, delta })
    }

    pub fn restrict(&self, keep: impl Fn(VertexId) -> bool) -> CylindricalLayout {
        CylindricalLayout {
            inner: self.inner.iter().filter(|(v, _)| keep(*v)).cloned().collect(),
            outer: self.outer.iter().filter(|(v, _)| keep(*v)).cloned().collect(),
            delta: self
                .delta
                .iter()
                .filter(|(e, _)| keep(e.lo) && keep(e.hi))
                .map(|(e, d)| (*e, d.clone()))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.len() + self.outer.len()
    }

    fn inner_turn(&self, v: VertexId) -> Option<&Turn> {
        self.inner.iter().find(|(u, _)| *u == v).map(|(_, t)| t)
    }

    /// Annulus edges as (inner vertex, inner position, displacement).
    fn spirals(&self) -> Vec<(VertexId, VertexId, Turn, Turn)> {
        self.delta
            .iter()
            .map(|(e, d)| {
                let (u, v) = if self.inner_turn(e.lo).is_some() { (e.lo, e.hi) } else { (e.hi, e.lo) };
                (u, v, self.inner_turn(u).unwrap().clone(), d.clone())
            })
            .collect()
    }

    /// Rotates every position by `by` turns.
    pub fn rotated(&self, by: &Turn) -> CylindricalLayout {
        let shift = |c: &[(VertexId, Turn)]| c.iter().map(|(v, t)| (*v, t + by)).collect();
        CylindricalLayout::new(shift(&self.inner), shift(&self.outer), self.delta.clone()).unwrap()
    }

    /// Mirror image: every position and displacement negated.
    pub fn mirrored(&self) -> CylindricalLayout {
        let neg = |c: &[(VertexId, Turn)]| c.iter().map(|(v, t)| (*v, -t)).collect();
        let delta = self.delta.iter().map(|(e, d)| (*e, -d)).collect();
        CylindricalLayout::new(neg(&self.inner), neg(&self.outer), delta).unwrap()
    }
}

fn cyclic_interleavings(circle: &[(VertexId, Turn)]) -> u64 {
    // Sorted by position, so interleaving along the circle is interleaving of indices.
    let m = circle.len();
    let mut total = 0;
    let chords: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    for (i, &(a, b)) in chords.iter().enumerate() {
        for &(c, d) in &chords[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                total += 1;
            }
        }
    }
    total
}

/// Number of integers strictly between `d0` and `d1`.
pub fn spiral_crossings(d0: &Turn, d1: &Turn) -> u64 {
    let (lo, hi) = if d0 <= d1 { (d0, d1) } else { (d1, d0) };
    // Integers z with lo < z < hi.
    let first = lo.floor().to_integer() + 1;
    let last = hi.ceil().to_integer() - 1;
    if last < first {
        0
    } else {
        let count: num_bigint::BigInt = last - first + 1u32;
        count.to_u64().unwrap()
    }
}

pub fn crossings_cylindrical(l: &CylindricalLayout) -> Result<u64> {
    let mut total = cyclic_interleavings(&l.inner) + cyclic_interleavings(&l.outer);
    let spirals = l.spirals();
    for (i, (u1, v1, t1, d1)) in spirals.iter().enumerate() {
        for (u2, v2, t2, d2) in &spirals[i + 1..] {
            let start = t1 - t2;
            let end = &start + d1 - d2;
            let c = spiral_crossings(&start, &end);
            if (u1 == u2 || v1 == v2) && c > 0 {
                return Err(Error::Structural(format!(
                    "adjacent annulus edges {u1}-{v1} and {u2}-{v2} would cross"
                )));
            }
            total += c;
        }
    }
    Ok(total)
}

/// Outer vertices 1..ceil(n/2) at i/m + i^2/(n^3+1), inner vertices at
/// i/k + 1/(4k) + i^2/(n^3+1); every annulus edge takes the shorter way around.
/// The quadratic perturbation breaks the arithmetic progressions that would
/// otherwise make three spirals meet in a point.
pub fn harary_hill_layout(n: usize) -> Result<CylindricalLayout> {
    require_n(n, "harary_hill")?;
    let m = n.div_ceil(2) as i64;
    let k = (n / 2) as i64;
    let bump = int(n as i64).pow(3) + int(1);
    let outer: Vec<(VertexId, Turn)> = (0..m)
        .map(|i| (VertexId(i as u32 + 1), ratio(i, m) + int(i * i) / &bump))
        .collect();
    let inner: Vec<(VertexId, Turn)> = (0..k)
        .map(|i| {
            (
                VertexId((m + i) as u32 + 1),
                frac(&(ratio(i, k) + ratio(1, 4 * k) + int(i * i) / &bump)),
            )
        })
        .collect();
    let mut delta = BTreeMap::new();
    for (u, tu) in &inner {
        for (v, tv) in &outer {
            delta.insert(EdgeKey::new(*u, *v), geodesic(&(tv - tu)));
        }
    }
    CylindricalLayout::new(inner, outer, delta)
}

pub fn harary_hill(n: usize) -> Result<(CylindricalLayout, Drawing)> {
    let l = harary_hill_layout(n)?;
    let d = realize(&Layout::Cylindrical(l.clone()), DEFAULT_RESOLUTION)?;
    Ok((l, d))
}

/// Rational point near angle `2 pi turn` on the unit circle, via the
/// half-angle parametrization with a dyadic tangent.
fn circle_point(turn: &Turn) -> Point {
    let f = to_f64(turn);
    let (g, flip) = if (0.25..0.75).contains(&f) {
        (f - 0.5, true)
    } else if f >= 0.75 {
        (f - 1.0, false)
    } else {
        (f, false)
    };
    let t = (std::f64::consts::PI * g).tan().clamp(-1.0, 1.0);
    let den: i64 = 1 << 32;
    let tq = ratio((t * den as f64).round() as i64, den);
    let w = int(1) + &tq * &tq;
    let x = (int(1) - &tq * &tq) / &w;
    let y = int(2) * tq / w;
    let p = Point::new(x, y);
    if flip {
        Point::new(-&p.x, -&p.y)
    } else {
        p
    }
}

/// A convex polygon close to the unit circle with a corner at each listed
/// turn, parametrized piecewise linearly by turn between corners.
struct Rim {
    turns: Vec<Turn>,
    corners: Vec<Point>,
}

impl Rim {
    fn new(turns: BTreeSet<Turn>) -> Result<Rim> {
        let turns: Vec<Turn> = turns.into_iter().collect();
        let corners: Vec<Point> = turns.iter().map(circle_point).collect();
        for w in corners.windows(2) {
            if cmp_angle(&w[0], &w[1]) != std::cmp::Ordering::Less {
                return Err(Error::Precondition("rim corners are not in angular order".into()));
            }
        }
        Ok(Rim { turns, corners })
    }

    /// Point at angular parameter `t` (any real) and radial parameter `rho`
    /// (the rim is at rho = 1; smaller rho is farther out).
    fn at(&self, t: &Turn, rho: &Scalar) -> Point {
        let f = frac(t);
        let m = self.turns.len();
        let j = match self.turns.binary_search(&f) {
            Ok(j) => return self.corners[j].scale(&(int(1) / rho)),
            Err(0) => m - 1,
            Err(j) => j - 1,
        };
        let (t0, c0) = (&self.turns[j], &self.corners[j]);
        let (t1, c1) = if j + 1 < m {
            (self.turns[j + 1].clone(), &self.corners[j + 1])
        } else {
            (&self.turns[0] + int(1), &self.corners[0])
        };
        let f = if f < *t0 { f + int(1) } else { f };
        let s = (f - t0) / (t1 - t0);
        c0.lerp(c1, &s).scale(&(int(1) / rho))
    }

    /// Breakpoints of the parametrization met strictly inside `(a, b)` (a < b, any reals).
    fn turns_between(&self, a: &Turn, b: &Turn) -> Vec<Turn> {
        let mut out = Vec::new();
        let base = a.floor().to_integer();
        let mut z = base;
        loop {
            let zq = Scalar::from_integer(z.clone());
            if &zq > b {
                break;
            }
            for t in &self.turns {
                let v = &zq + t;
                if &v > a && &v < b {
                    out.push(v);
                }
            }
            z += 1;
        }
        out
    }
}

/// Realization in "projective polar" coordinates: the point with angular
/// parameter t and radial parameter rho is `B(t) / rho`, where B runs along
/// the rim polygon. Within one rim sector this is a projective map of the
/// (t, rho) strip, so segments in (t, rho) become straight segments. Inner
/// vertices sit at rho = 1 with straight chords inside the rim; outer
/// vertices sit at rho = 1/2; annulus edges are straight in (t, rho); outer
/// edges follow rho = 1/2 - (t - t_a)(t_b - t) sampled on the common corner
/// grid, so as in the two-page case all crossing counts are exact.
pub fn realize_cylindrical(l: &CylindricalLayout, resolution: u32) -> Result<Drawing> {
    let steps = 8 * resolution.max(1) as i64;
    let mut turns: BTreeSet<Turn> = (0..steps).map(|j| ratio(j, steps)).collect();
    turns.extend(l.inner.iter().chain(&l.outer).map(|(_, t)| t.clone()));
    let rim = Rim::new(turns)?;
    let one = int(1);
    let half = ratio(1, 2);

    let mut vertices = BTreeMap::new();
    for (v, t) in &l.inner {
        vertices.insert(*v, rim.at(t, &one));
    }
    for (v, t) in &l.outer {
        vertices.insert(*v, rim.at(t, &half));
    }
    let mut edges = BTreeMap::new();
    for (i, (a, _)) in l.inner.iter().enumerate() {
        for (b, _) in &l.inner[i + 1..] {
            let line = Polyline::segment(vertices[a].clone(), vertices[b].clone())?;
            edges.insert(EdgeKey::new(*a, *b), line);
        }
    }
    for (i, (a, ta)) in l.outer.iter().enumerate() {
        for (b, tb) in &l.outer[i + 1..] {
            let mut pts = vec![vertices[a].clone()];
            for t in rim.turns_between(ta, tb) {
                let rho = &half - (&t - ta) * (tb - &t);
                pts.push(rim.at(&t, &rho));
            }
            pts.push(vertices[b].clone());
            edges.insert(EdgeKey::new(*a, *b), Polyline::new(pts)?);
        }
    }
    for (u, v, tu, d) in l.spirals() {
        let end = &tu + &d;
        let mut ts = if d.is_negative() {
            let mut x = rim.turns_between(&end, &tu);
            x.reverse();
            x
        } else {
            rim.turns_between(&tu, &end)
        };
        ts.retain(|t| t != &tu && t != &end);
        let mut pts = vec![vertices[&u].clone()];
        for t in ts {
            // rho falls linearly from 1 to 1/2 as t runs from tu to tu + d.
            let rho = &one - (&t - &tu) / &d * &half;
            pts.push(rim.at(&t, &rho));
        }
        pts.push(vertices[&v].clone());
        edges.insert(EdgeKey::new(u, v), Polyline::new(pts)?);
    }
    Drawing::new(ClassTag::Cylindrical, vertices, edges, Some(Layout::Cylindrical(l.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goodness::{crossing_count, validate_good_drawing};
    use crate::kedges::zeta;

    #[test]
    fn spiral_rule() {
        assert_eq!(spiral_crossings(&ratio(2, 5), &ratio(-3, 10)), 1);
        assert_eq!(spiral_crossings(&ratio(1, 2), &ratio(1, 2)), 0);
        assert_eq!(spiral_crossings(&ratio(-1, 4), &ratio(9, 4)), 3);
        assert_eq!(spiral_crossings(&int(0), &ratio(1, 3)), 0);
        assert_eq!(spiral_crossings(&int(0), &int(1)), 0);
    }

    #[test]
    fn rim_is_convex_and_close_to_circle() {
        let turns: BTreeSet<Turn> = (0..40).map(|j| ratio(j, 40)).collect();
        let rim = Rim::new(turns).unwrap();
        for c in &rim.corners {
            let [x, y] = c.approx();
            assert!((x * x + y * y - 1.0).abs() < 1e-12);
        }
        assert_eq!(rim.at(&ratio(1, 4), &int(1)), Point::from_ints(0, 1));
    }

    #[test]
    fn harary_hill_hits_zeta() {
        assert!(harary_hill(2).is_err());
        for n in 3..=10 {
            let (l, d) = harary_hill(n).unwrap();
            assert_eq!(crossings_cylindrical(&l).unwrap(), zeta(n as u64), "n={n}");
            assert_eq!(crossing_count(&d).unwrap(), zeta(n as u64), "n={n}");
        }
    }

    #[test]
    fn winding_spirals_realize_faithfully() {
        // Two inner and two outer vertices; one annulus edge winds once around.
        let inner = vec![(VertexId(3), ratio(1, 10)), (VertexId(4), ratio(3, 5))];
        let outer = vec![(VertexId(1), ratio(1, 7)), (VertexId(2), ratio(2, 3))];
        let mut delta = BTreeMap::new();
        delta.insert(EdgeKey::of(1, 3), ratio(1, 7) - ratio(1, 10) + int(1));
        delta.insert(EdgeKey::of(2, 3), ratio(2, 3) - ratio(1, 10));
        delta.insert(EdgeKey::of(1, 4), ratio(1, 7) - ratio(3, 5) + int(1));
        delta.insert(EdgeKey::of(2, 4), ratio(2, 3) - ratio(3, 5));
        let l = CylindricalLayout::new(inner, outer, delta).unwrap();
        let expected = crossings_cylindrical(&l).unwrap();
        let d = realize_cylindrical(&l, 2).unwrap();
        assert!(validate_good_drawing(&d).is_good(), "{:?}", validate_good_drawing(&d));
        assert_eq!(crossing_count(&d).unwrap(), expected);
        assert!(expected > 0);
    }

    #[test]
    fn symmetry_of_rule() {
        let l = harary_hill_layout(9).unwrap();
        let c = crossings_cylindrical(&l).unwrap();
        assert_eq!(crossings_cylindrical(&l.rotated(&ratio(3, 11))).unwrap(), c);
        assert_eq!(crossings_cylindrical(&l.mirrored()).unwrap(), c);
    }

    #[test]
    fn malformed_layouts() {
        let l = harary_hill_layout(5).unwrap();
        let mut delta = l.delta.clone();
        delta.insert(EdgeKey::of(1, 2), ratio(1, 3));
        assert!(matches!(
            CylindricalLayout::new(l.inner.clone(), l.outer.clone(), delta),
            Err(Error::Structural(_))
        ));
        let mut delta = l.delta.clone();
        let k = *delta.keys().next().unwrap();
        *delta.get_mut(&k).unwrap() += ratio(1, 5);
        assert!(CylindricalLayout::new(l.inner.clone(), l.outer.clone(), delta).is_err());
    }
}
