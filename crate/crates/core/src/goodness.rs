//! Pairwise edge intersections, goodness validation and crossing records.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::drawing::{Drawing, EdgeKey, Polyline, VertexId};
use crate::error::{Error, Result};
use crate::geom::{cmp_angle, intersect_segments, on_segment, BBox, SegHit};
use crate::scalar::{one, zero, Point, Scalar};

/// Position along a polyline: segment index and parameter `t` in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyPos {
    pub seg: usize,
    pub t: Scalar,
}

impl PolyPos {
    fn normalized(seg: usize, t: Scalar) -> PolyPos {
        if t == one() {
            PolyPos { seg: seg + 1, t: zero() }
        } else {
            PolyPos { seg, t }
        }
    }
}

impl PartialOrd for PolyPos {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PolyPos {
    fn cmp(&self, other: &Self) -> Ordering {
        self.seg.cmp(&other.seg).then_with(|| self.t.cmp(&other.t))
    }
}

/// A common point of two edges away from their shared endpoint.
#[derive(Clone, Debug)]
pub struct Contact {
    pub point: Point,
    pub pos_a: PolyPos,
    pub pos_b: PolyPos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SelfCrossing { edge: EdgeKey, point: Option<Point> },
    AdjacentEdgesMeet { a: EdgeKey, b: EdgeKey, point: Point },
    MultipleCrossings { a: EdgeKey, b: EdgeKey, count: usize },
    ThroughVertex { edge: EdgeKey, vertex: VertexId },
    Concurrent { point: Point, edges: Vec<EdgeKey> },
    Tangency { a: EdgeKey, b: EdgeKey, point: Point },
    Overlap { a: EdgeKey, b: EdgeKey },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfCrossing { edge, .. } => write!(f, "edge {edge} crosses itself"),
            Violation::AdjacentEdgesMeet { a, b, point } => {
                write!(f, "adjacent edges {a} and {b} meet at {point:?}")
            }
            Violation::MultipleCrossings { a, b, count } => {
                write!(f, "pair {a}, {b} crosses {count} times")
            }
            Violation::ThroughVertex { edge, vertex } => {
                write!(f, "edge {edge} passes through vertex {vertex}")
            }
            Violation::Concurrent { point, edges } => {
                write!(f, "{} edges pass through {point:?}", edges.len())
            }
            Violation::Tangency { a, b, point } => {
                write!(f, "edges {a} and {b} touch without crossing at {point:?}")
            }
            Violation::Overlap { a, b } => write!(f, "edges {a} and {b} overlap"),
        }
    }
}

/// Result of [`validate_good_drawing`]: empty means good.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoodnessReport {
    pub violations: Vec<Violation>,
}

impl GoodnessReport {
    pub fn is_good(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingRecord {
    pub a: EdgeKey,
    pub b: EdgeKey,
    pub point: Point,
    pub multiplicity: u32,
}

#[derive(Debug)]
pub struct IntersectionTable {
    /// Non-endpoint contacts per edge pair `(a, b)`, `a < b`.
    pub(crate) contacts: BTreeMap<(EdgeKey, EdgeKey), Vec<Contact>>,
    pub report: GoodnessReport,
}

impl IntersectionTable {
    /// Keeps only pairs whose four endpoints all survive.
    pub(crate) fn restrict(&self, vertices: &BTreeMap<VertexId, Point>) -> IntersectionTable {
        let alive = |k: &EdgeKey| vertices.contains_key(&k.lo) && vertices.contains_key(&k.hi);
        IntersectionTable {
            contacts: self
                .contacts
                .iter()
                .filter(|((a, b), _)| alive(a) && alive(b))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            report: self.report.clone(),
        }
    }

    pub fn crossing_pairs(&self) -> usize {
        self.contacts.len()
    }
}

struct EdgeGeom<'a> {
    key: EdgeKey,
    line: &'a Polyline,
    bbox: BBox,
    seg_boxes: Vec<BBox>,
}

impl<'a> EdgeGeom<'a> {
    fn new(key: EdgeKey, line: &'a Polyline) -> Self {
        let pts = line.points();
        let seg_boxes = pts.windows(2).map(BBox::of_points).collect();
        EdgeGeom {
            key,
            line,
            bbox: line.bbox(),
            seg_boxes,
        }
    }
}

/// Neighbors of the contact point along the polyline: `(before, after)`.
fn neighbors<'a>(line: &'a Polyline, pos: &PolyPos) -> (&'a Point, &'a Point) {
    let pts = line.points();
    if pos.t == zero() {
        (&pts[pos.seg - 1], &pts[pos.seg + 1])
    } else {
        (&pts[pos.seg], &pts[pos.seg + 1])
    }
}

/// Whether the two curves through `x` cross there (alternate around `x`) rather than touch.
fn transversal(a: &Polyline, pa: &PolyPos, b: &Polyline, pb: &PolyPos, x: &Point) -> bool {
    let (a0, a1) = neighbors(a, pa);
    let (b0, b1) = neighbors(b, pb);
    let mut dirs = [
        (a0.sub(x), 0u8),
        (a1.sub(x), 0u8),
        (b0.sub(x), 1u8),
        (b1.sub(x), 1u8),
    ];
    dirs.sort_by(|p, q| cmp_angle(&p.0, &q.0));
    for i in 0..4 {
        if cmp_angle(&dirs[i].0, &dirs[(i + 1) % 4].0) == Ordering::Equal {
            return false;
        }
    }
    dirs[0].1 != dirs[1].1 && dirs[1].1 != dirs[2].1 && dirs[2].1 != dirs[3].1
}

enum PairScan {
    Contacts(Vec<Contact>),
    Overlap,
}

fn scan_pair(a: &EdgeGeom, b: &EdgeGeom) -> PairScan {
    let pa = a.line.points();
    let pb = b.line.points();
    let mut found: Vec<Contact> = Vec::new();
    for (i, sa) in a.seg_boxes.iter().enumerate() {
        if !sa.overlaps(&b.bbox) {
            continue;
        }
        for (j, sb) in b.seg_boxes.iter().enumerate() {
            if !sa.overlaps(sb) {
                continue;
            }
            match intersect_segments(&pa[i], &pa[i + 1], &pb[j], &pb[j + 1]) {
                SegHit::None => {}
                SegHit::Overlap => return PairScan::Overlap,
                SegHit::Point { p, t, u } => {
                    if found.iter().any(|c| c.point == p) {
                        continue;
                    }
                    found.push(Contact {
                        point: p,
                        pos_a: PolyPos::normalized(i, t),
                        pos_b: PolyPos::normalized(j, u),
                    });
                }
            }
        }
    }
    PairScan::Contacts(found)
}

fn self_crossing(g: &EdgeGeom) -> Option<Violation> {
    let pts = g.line.points();
    let m = g.seg_boxes.len();
    for i in 0..m {
        for j in i + 1..m {
            if !g.seg_boxes[i].overlaps(&g.seg_boxes[j]) {
                continue;
            }
            match intersect_segments(&pts[i], &pts[i + 1], &pts[j], &pts[j + 1]) {
                SegHit::None => {}
                SegHit::Overlap => return Some(Violation::SelfCrossing { edge: g.key, point: None }),
                SegHit::Point { p, .. } => {
                    if j == i + 1 && p == pts[i + 1] {
                        continue;
                    }
                    return Some(Violation::SelfCrossing {
                        edge: g.key,
                        point: Some(p),
                    });
                }
            }
        }
    }
    None
}

pub(crate) fn build_table(d: &Drawing) -> IntersectionTable {
    let geoms: Vec<EdgeGeom> = d.edges().iter().map(|(k, l)| EdgeGeom::new(*k, l)).collect();
    let mut violations = Vec::new();
    let mut contacts = BTreeMap::new();
    let mut at_point: HashMap<Point, BTreeSet<EdgeKey>> = HashMap::new();

    for g in &geoms {
        if let Some(v) = self_crossing(g) {
            violations.push(v);
        }
    }

    for (v, p) in d.vertices() {
        for g in &geoms {
            if g.key.contains(*v) || !g.bbox.contains_approx(p) {
                continue;
            }
            let pts = g.line.points();
            if (0..g.seg_boxes.len())
                .any(|i| g.seg_boxes[i].contains_approx(p) && on_segment(&pts[i], &pts[i + 1], p))
            {
                violations.push(Violation::ThroughVertex {
                    edge: g.key,
                    vertex: *v,
                });
            }
        }
    }

    for (i, a) in geoms.iter().enumerate() {
        for b in &geoms[i + 1..] {
            if !a.bbox.overlaps(&b.bbox) {
                continue;
            }
            let found = match scan_pair(a, b) {
                PairScan::Overlap => {
                    violations.push(Violation::Overlap { a: a.key, b: b.key });
                    continue;
                }
                PairScan::Contacts(c) => c,
            };
            let endpoints: Vec<&Point> = [a.key.lo, a.key.hi, b.key.lo, b.key.hi]
                .iter()
                .map(|v| &d.vertices()[v])
                .collect();
            let shared = a.key.shared_vertex(&b.key);
            let mut kept = Vec::new();
            for c in found {
                if let Some(w) = shared {
                    if c.point == d.vertices()[&w] {
                        continue;
                    }
                    violations.push(Violation::AdjacentEdgesMeet {
                        a: a.key,
                        b: b.key,
                        point: c.point.clone(),
                    });
                    at_point.entry(c.point.clone()).or_default().extend([a.key, b.key]);
                    continue;
                }
                // A contact at an endpoint is reported by the vertex check.
                if endpoints.iter().any(|p| **p == c.point) {
                    continue;
                }
                if !transversal(a.line, &c.pos_a, b.line, &c.pos_b, &c.point) {
                    violations.push(Violation::Tangency {
                        a: a.key,
                        b: b.key,
                        point: c.point.clone(),
                    });
                }
                at_point.entry(c.point.clone()).or_default().extend([a.key, b.key]);
                kept.push(c);
            }
            if shared.is_none() && kept.len() >= 2 {
                violations.push(Violation::MultipleCrossings {
                    a: a.key,
                    b: b.key,
                    count: kept.len(),
                });
            }
            if !kept.is_empty() && shared.is_none() {
                contacts.insert((a.key, b.key), kept);
            }
        }
    }

    let mut concurrent: Vec<(Point, Vec<EdgeKey>)> = at_point
        .into_iter()
        .filter(|(_, e)| e.len() >= 3)
        .map(|(p, e)| (p, e.into_iter().collect()))
        .collect();
    concurrent.sort();
    violations.extend(
        concurrent
            .into_iter()
            .map(|(point, edges)| Violation::Concurrent { point, edges }),
    );

    IntersectionTable {
        contacts,
        report: GoodnessReport { violations },
    }
}

pub(crate) fn table(d: &Drawing) -> &Arc<IntersectionTable> {
    d.table.get_or_init(|| Arc::new(build_table(d)))
}

/// Every goodness violation of `d`; empty means `d` is a good drawing.
pub fn validate_good_drawing(d: &Drawing) -> GoodnessReport {
    table(d).report.clone()
}

pub fn is_good(d: &Drawing) -> bool {
    table(d).report.is_good()
}

pub(crate) fn require_good(d: &Drawing) -> Result<&Arc<IntersectionTable>> {
    let t = table(d);
    if t.report.is_good() {
        Ok(t)
    } else {
        Err(Error::NotGood(Box::new(t.report.clone())))
    }
}

/// Crossing records in lexicographic edge-pair order, plus their number.
pub fn compute_crossings_geometric(d: &Drawing) -> Result<(Vec<CrossingRecord>, u64)> {
    let t = require_good(d)?;
    let records: Vec<CrossingRecord> = t
        .contacts
        .iter()
        .map(|((a, b), cs)| CrossingRecord {
            a: *a,
            b: *b,
            point: cs[0].point.clone(),
            multiplicity: cs.len() as u32,
        })
        .collect();
    let total = records.len() as u64;
    Ok((records, total))
}

pub fn crossing_count(d: &Drawing) -> Result<u64> {
    Ok(require_good(d)?.contacts.len() as u64)
}

/// Edges of `d` that take part in at least one crossing.
pub fn crossed_edges(d: &Drawing) -> Result<BTreeSet<EdgeKey>> {
    let t = require_good(d)?;
    Ok(t.contacts.keys().flat_map(|(a, b)| [*a, *b]).collect())
}

/// Edges crossing `e`.
pub fn crossing_partners(d: &Drawing, e: EdgeKey) -> Result<Vec<EdgeKey>> {
    let t = require_good(d)?;
    Ok(t.contacts
        .keys()
        .filter_map(|(a, b)| {
            if *a == e {
                Some(*b)
            } else if *b == e {
                Some(*a)
            } else {
                None
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::ClassTag;

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

    #[test]
    fn triangle_is_good() {
        let d = straight(&[(0, 0), (1, 0), (0, 1)]);
        assert!(validate_good_drawing(&d).is_good());
        assert_eq!(crossing_count(&d).unwrap(), 0);
    }

    #[test]
    fn convex_k4_one_crossing() {
        let d = straight(&[(0, 0), (1, 1), (2, 4), (3, 9)]);
        assert!(validate_good_drawing(&d).is_good());
        let (recs, total) = compute_crossings_geometric(&d).unwrap();
        assert_eq!(total, 1);
        assert_eq!((recs[0].a, recs[0].b), (EdgeKey::of(1, 3), EdgeKey::of(2, 4)));
        assert_eq!(recs[0].multiplicity, 1);
    }

    #[test]
    fn double_crossing_is_reported() {
        let d = straight(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let mut edges = d.edges().clone();
        // Diagonal 1-3 zig-zags across diagonal 2-4 three times.
        let p = |x, y| Point::from_ints(x, y);
        edges.insert(
            EdgeKey::of(1, 3),
            Polyline::new(vec![p(0, 0), p(3, 2), p(1, 2), p(4, 4)]).unwrap(),
        );
        let d = Drawing::new(ClassTag::Generic, d.vertices().clone(), edges, None).unwrap();
        let report = validate_good_drawing(&d);
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::MultipleCrossings { count: 3, .. }
        )), "{report:?}");
        assert!(matches!(compute_crossings_geometric(&d), Err(Error::NotGood(_))));
    }

    #[test]
    fn tangency_and_through_vertex() {
        let p = |x, y| Point::from_ints(x, y);
        let d = straight(&[(0, 0), (4, 0), (2, 2), (2, -2)]);
        // Reroute 3-4 through a point touching 1-2 at (2,0) from one side only.
        let mut edges = d.edges().clone();
        edges.insert(
            EdgeKey::of(3, 4),
            Polyline::new(vec![p(2, 2), p(2, 0), p(6, 1), p(6, -3), p(2, -2)]).unwrap(),
        );
        let d2 = Drawing::new(ClassTag::Generic, d.vertices().clone(), edges, None).unwrap();
        let r = validate_good_drawing(&d2);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Tangency { .. })), "{r:?}");

        let d3 = straight(&[(0, 0), (2, 0), (1, 0), (5, 5)]);
        let r = validate_good_drawing(&d3);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::ThroughVertex { .. })));
    }

    #[test]
    fn concurrency_detected() {
        // Regular hexagon-like symmetric points: three long diagonals meet at the origin.
        let d = straight(&[(-2, 0), (2, 0), (-1, 2), (1, -2), (1, 2), (-1, -2)]);
        let r = validate_good_drawing(&d);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Concurrent { .. })));
    }

    #[test]
    fn self_crossing_detected() {
        let p = |x, y| Point::from_ints(x, y);
        let d = straight(&[(0, 0), (10, 0), (5, 10)]);
        let mut edges = d.edges().clone();
        edges.insert(
            EdgeKey::of(1, 2),
            Polyline::new(vec![p(0, 0), p(6, -2), p(6, -1), p(3, -2), p(10, 0)]).unwrap(),
        );
        let d2 = Drawing::new(ClassTag::Generic, d.vertices().clone(), edges, None).unwrap();
        let r = validate_good_drawing(&d2);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::SelfCrossing { .. })), "{r:?}");
    }
}
