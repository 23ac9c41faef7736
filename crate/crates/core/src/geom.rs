//! Filtered exact predicates on [`Point`]s.
//!
//! Every predicate first evaluates in `f64` with a conservative error bound and
//! only falls back to rational arithmetic when the sign is not certain.

use std::cmp::Ordering;

use crate::scalar::{sign, Point, Scalar};

const FILTER: f64 = 1e-12;

/// Sign of the cross product `(b - a) x (c - a)`: 1 for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    let [ax, ay] = a.approx();
    let [bx, by] = b.approx();
    let [cx, cy] = c.approx();
    let det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    let perm = (bx.abs() + ax.abs()) * (cy.abs() + ay.abs())
        + (by.abs() + ay.abs()) * (cx.abs() + ax.abs());
    if det.is_finite() && perm.is_finite() && det.abs() > FILTER * perm {
        return if det > 0.0 { 1 } else { -1 };
    }
    let det = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    sign(&det)
}

/// Sign of `u x v` for direction vectors.
pub fn cross_sign(u: &Point, v: &Point) -> i32 {
    let [ux, uy] = u.approx();
    let [vx, vy] = v.approx();
    let det = ux * vy - uy * vx;
    let perm = ux.abs() * vy.abs() + uy.abs() * vx.abs();
    if det.is_finite() && perm.is_finite() && det.abs() > FILTER * perm {
        return if det > 0.0 { 1 } else { -1 };
    }
    sign(&(&u.x * &v.y - &u.y * &v.x))
}

pub fn cross(u: &Point, v: &Point) -> Scalar {
    &u.x * &v.y - &u.y * &v.x
}

fn half_plane(v: &Point) -> u8 {
    let sy = sign(&v.y);
    if sy > 0 || (sy == 0 && sign(&v.x) > 0) {
        0
    } else {
        1
    }
}

/// Orders nonzero direction vectors by angle in `[0, 2pi)` measured from +x.
pub fn cmp_angle(u: &Point, v: &Point) -> Ordering {
    let (hu, hv) = (half_plane(u), half_plane(v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    match cross_sign(u, v) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Axis-aligned box in `f64`, padded so that disjointness implies exact disjointness.
#[derive(Clone, Copy, Debug)]
pub struct BBox {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl BBox {
    pub fn empty() -> BBox {
        BBox {
            lo: [f64::INFINITY; 2],
            hi: [f64::NEG_INFINITY; 2],
        }
    }

    pub fn of_points<'a>(pts: impl IntoIterator<Item = &'a Point>) -> BBox {
        let mut b = BBox::empty();
        for p in pts {
            b.add(p);
        }
        b.pad()
    }

    pub fn add(&mut self, p: &Point) {
        let a = p.approx();
        for k in 0..2 {
            self.lo[k] = self.lo[k].min(a[k]);
            self.hi[k] = self.hi[k].max(a[k]);
        }
    }

    pub(crate) fn pad(mut self) -> BBox {
        for k in 0..2 {
            let m = 1e-9 * (1.0 + self.lo[k].abs().max(self.hi[k].abs()));
            self.lo[k] -= m;
            self.hi[k] += m;
        }
        self
    }

    pub fn overlaps(&self, other: &BBox) -> bool {
        self.lo[0] <= other.hi[0]
            && other.lo[0] <= self.hi[0]
            && self.lo[1] <= other.hi[1]
            && other.lo[1] <= self.hi[1]
    }

    pub fn contains_approx(&self, p: &Point) -> bool {
        let a = p.approx();
        self.lo[0] <= a[0] && a[0] <= self.hi[0] && self.lo[1] <= a[1] && a[1] <= self.hi[1]
    }
}

#[derive(Clone, Debug)]
pub enum SegHit {
    None,
    /// Single common point with its parameters along each segment.
    Point { p: Point, t: Scalar, u: Scalar },
    /// Collinear segments sharing a piece of positive length.
    Overlap,
}

/// Parameter of `p` along segment `a -> b`, assuming `p` lies on its supporting line.
fn param_on(a: &Point, b: &Point, p: &Point) -> Scalar {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

pub fn intersect_segments(a: &Point, b: &Point, c: &Point, d: &Point) -> SegHit {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    if o1 == 0 && o2 == 0 {
        return collinear_hit(a, b, c, d);
    }
    if o1 * o2 > 0 {
        return SegHit::None;
    }
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o3 * o4 > 0 {
        return SegHit::None;
    }
    let ab = b.sub(a);
    let cd = d.sub(c);
    let ca = c.sub(a);
    let denom = cross(&ab, &cd);
    let t = cross(&ca, &cd) / &denom;
    let u = cross(&ca, &ab) / &denom;
    // Snap exact endpoint hits so the point compares equal to the vertex.
    let p = if o1 == 0 {
        c.clone()
    } else if o2 == 0 {
        d.clone()
    } else if o3 == 0 {
        a.clone()
    } else if o4 == 0 {
        b.clone()
    } else {
        a.lerp(b, &t)
    };
    SegHit::Point { p, t, u }
}

fn collinear_hit(a: &Point, b: &Point, c: &Point, d: &Point) -> SegHit {
    let zero = Scalar::from_integer(0.into());
    let one = Scalar::from_integer(1.into());
    let tc = param_on(a, b, c);
    let td = param_on(a, b, d);
    let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
    let start = if lo > zero { lo } else { zero.clone() };
    let end = if hi < one { hi } else { one };
    match start.cmp(&end) {
        Ordering::Greater => SegHit::None,
        Ordering::Less => SegHit::Overlap,
        Ordering::Equal => {
            let p = a.lerp(b, &start);
            let u = param_on(c, d, &p);
            SegHit::Point { p, t: start, u }
        }
    }
}

/// Whether `p` lies on the closed segment `a b`.
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let (xl, xh) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (yl, yh) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *xl <= p.x && p.x <= *xh && *yl <= p.y && p.y <= *yh
}

/// Contribution of segment `a -> b` to the winding number around `p`
/// (rightward ray, half-open in y). Summing over a closed curve gives its winding number.
pub fn winding_step(a: &Point, b: &Point, p: &Point) -> i32 {
    if a.y <= p.y {
        if b.y > p.y && orient(a, b, p) > 0 {
            return 1;
        }
    } else if b.y <= p.y && orient(a, b, p) < 0 {
        return -1;
    }
    0
}

/// Twice the signed area contribution `a x b` of a directed segment.
pub fn shoelace(a: &Point, b: &Point) -> Scalar {
    &a.x * &b.y - &a.y * &b.x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, -1)), -1);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(3, 3)), 0);
        // Nearly collinear: the filter must defer to exact arithmetic.
        let a = Point::new(ratio(1, 3), ratio(1, 3));
        let b = Point::new(ratio(2, 3), ratio(2, 3));
        let c = Point::new(ratio(10, 3), ratio(10, 3));
        assert_eq!(orient(&a, &b, &c), 0);
    }

    #[test]
    fn proper_and_endpoint_hits() {
        match intersect_segments(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)) {
            SegHit::Point { p: x, t, u } => {
                assert_eq!(x, p(1, 1));
                assert_eq!(t, ratio(1, 2));
                assert_eq!(u, ratio(1, 2));
            }
            other => panic!("{other:?}"),
        }
        match intersect_segments(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 5)) {
            SegHit::Point { p: x, u, .. } => {
                assert_eq!(x, p(1, 0));
                assert_eq!(u, int(0));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            intersect_segments(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)),
            SegHit::None
        ));
    }

    #[test]
    fn collinear_cases() {
        assert!(matches!(
            intersect_segments(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)),
            SegHit::Overlap
        ));
        assert!(matches!(
            intersect_segments(&p(0, 0), &p(1, 0), &p(1, 0), &p(3, 0)),
            SegHit::Point { .. }
        ));
        assert!(matches!(
            intersect_segments(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)),
            SegHit::None
        ));
    }

    #[test]
    fn angles_sort_counterclockwise() {
        let mut v = vec![p(0, -1), p(-1, 0), p(1, 1), p(1, 0), p(0, 1)];
        v.sort_by(cmp_angle);
        assert_eq!(v, vec![p(1, 0), p(1, 1), p(0, 1), p(-1, 0), p(0, -1)]);
    }

    #[test]
    fn winding_of_square() {
        let sq = [p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(0, 0)];
        let inside = Point::new(ratio(1, 2), int(1));
        let outside = p(3, 1);
        let w = |q: &Point| -> i32 { sq.windows(2).map(|s| winding_step(&s[0], &s[1], q)).sum() };
        assert_eq!(w(&inside), 1);
        assert_eq!(w(&outside), 0);
    }
}
