//! Drawings of complete graphs with polyline edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::constructions::Layout;
use crate::error::{Error, Result};
use crate::geom::BBox;
use crate::goodness::IntersectionTable;
use crate::scalar::{Point, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered vertex pair, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub lo: VertexId,
    pub hi: VertexId,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId) -> EdgeKey {
        assert_ne!(a, b, "loops are not edges");
        if a < b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }

    pub fn of(a: u32, b: u32) -> EdgeKey {
        EdgeKey::new(VertexId(a), VertexId(b))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn shared_vertex(&self, other: &EdgeKey) -> Option<VertexId> {
        if other.contains(self.lo) {
            Some(self.lo)
        } else if other.contains(self.hi) {
            Some(self.hi)
        } else {
            None
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Polyline> {
        if points.len() < 2 {
            return Err(Error::Structural("polyline needs at least two points".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Structural(format!(
                "polyline repeats consecutive point {:?}",
                w[0]
            )));
        }
        Ok(Polyline { points })
    }

    pub fn segment(a: Point, b: Point) -> Result<Polyline> {
        Polyline::new(vec![a, b])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        &self.points[self.points.len() - 1]
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }

    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Polyline {
        Polyline {
            points: self.points.iter().map(f).collect(),
        }
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(&self.points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Generic,
    TwoPage,
    Cylindrical,
    Convex,
    SphericalProjected,
}

impl ClassTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassTag::Generic => "generic",
            ClassTag::TwoPage => "two-page",
            ClassTag::Cylindrical => "cylindrical",
            ClassTag::Convex => "convex",
            ClassTag::SphericalProjected => "spherical-projected",
        }
    }

    pub fn parse(s: &str) -> Result<ClassTag> {
        Ok(match s {
            "generic" => ClassTag::Generic,
            "two-page" => ClassTag::TwoPage,
            "cylindrical" => ClassTag::Cylindrical,
            "convex" => ClassTag::Convex,
            "spherical-projected" => ClassTag::SphericalProjected,
            other => return Err(Error::Parse(format!("unknown drawing class {other:?}"))),
        })
    }
}

/// A drawing of `K_n`: one polyline per vertex pair, oriented from `lo` to `hi`.
///
/// Immutable after construction. The pairwise intersection table is computed on
/// first use and inherited by sub-drawings.
pub struct Drawing {
    class: ClassTag,
    vertices: BTreeMap<VertexId, Point>,
    edges: BTreeMap<EdgeKey, Polyline>,
    layout: Option<Layout>,
    pub(crate) table: OnceLock<Arc<IntersectionTable>>,
}

impl Clone for Drawing {
    fn clone(&self) -> Self {
        let table = OnceLock::new();
        if let Some(t) = self.table.get() {
            let _ = table.set(Arc::clone(t));
        }
        Drawing {
            class: self.class,
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            layout: self.layout.clone(),
            table,
        }
    }
}

impl fmt::Debug for Drawing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Drawing")
            .field("n", &self.n())
            .field("class", &self.class)
            .finish()
    }
}

impl Drawing {
    /// Checks the structural contract: distinct vertex positions, exactly one
    /// polyline per vertex pair, polyline ends at its host vertices.
    pub fn new(
        class: ClassTag,
        vertices: BTreeMap<VertexId, Point>,
        edges: BTreeMap<EdgeKey, Polyline>,
        layout: Option<Layout>,
    ) -> Result<Drawing> {
        if vertices.is_empty() {
            return Err(Error::Structural("drawing has no vertices".into()));
        }
        let distinct: BTreeSet<&Point> = vertices.values().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::Structural("two vertices share a position".into()));
        }
        let n = vertices.len();
        if edges.len() != n * (n - 1) / 2 {
            return Err(Error::Structural(format!(
                "expected {} edges for K_{n}, found {}",
                n * (n - 1) / 2,
                edges.len()
            )));
        }
        let mut edges = edges;
        for (key, line) in edges.iter_mut() {
            let (Some(a), Some(b)) = (vertices.get(&key.lo), vertices.get(&key.hi)) else {
                return Err(Error::Structural(format!("edge {key} uses an unknown vertex")));
            };
            if line.first() == a && line.last() == b {
                continue;
            }
            if line.first() == b && line.last() == a {
                *line = line.reversed();
                continue;
            }
            return Err(Error::Structural(format!(
                "polyline of edge {key} does not join its endpoints"
            )));
        }
        Ok(Drawing {
            class,
            vertices,
            edges,
            layout,
            table: OnceLock::new(),
        })
    }

    /// Straight-line drawing on the given points.
    pub fn straight(class: ClassTag, points: Vec<(VertexId, Point)>) -> Result<Drawing> {
        let vertices: BTreeMap<VertexId, Point> = points.into_iter().collect();
        let ids: Vec<VertexId> = vertices.keys().copied().collect();
        let mut edges = BTreeMap::new();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let line = Polyline::segment(vertices[&a].clone(), vertices[&b].clone())?;
                edges.insert(EdgeKey::new(a, b), line);
            }
        }
        Drawing::new(class, vertices, edges, None)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.layout.as_ref()
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn vertices(&self) -> &BTreeMap<VertexId, Point> {
        &self.vertices
    }

    pub fn position(&self, v: VertexId) -> Result<&Point> {
        self.vertices.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn edges(&self) -> &BTreeMap<EdgeKey, Polyline> {
        &self.edges
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&Polyline> {
        self.edges.get(key)
    }

    /// Polyline of `a -> b`, oriented from `a`.
    pub fn directed(&self, a: VertexId, b: VertexId) -> Option<Polyline> {
        let line = self.edges.get(&EdgeKey::new(a, b))?;
        Some(if a < b { line.clone() } else { line.reversed() })
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(self.edges.values().flat_map(|l| l.points().iter()).chain(self.vertices.values()))
    }

    /// A point strictly outside every polyline's bounding box (so in the unbounded face).
    pub fn far_point(&self) -> Point {
        let mut hi_x: Option<Scalar> = None;
        let mut hi_y: Option<Scalar> = None;
        for p in self.edges.values().flat_map(|l| l.points()).chain(self.vertices.values()) {
            if hi_x.as_ref().is_none_or(|h| p.x > *h) {
                hi_x = Some(p.x.clone());
            }
            if hi_y.as_ref().is_none_or(|h| p.y > *h) {
                hi_y = Some(p.y.clone());
            }
        }
        let one = crate::scalar::one();
        Point::new(hi_x.unwrap() + &one, hi_y.unwrap() + one)
    }

    /// Sub-drawing on the remaining vertices; polylines are unchanged.
    pub fn delete_vertices(&self, remove: &BTreeSet<VertexId>) -> Result<Drawing> {
        for v in remove {
            if !self.vertices.contains_key(v) {
                return Err(Error::UnknownVertex(*v));
            }
        }
        if remove.len() >= self.vertices.len() {
            return Err(Error::Domain("deleting every vertex leaves an empty drawing".into()));
        }
        let vertices: BTreeMap<VertexId, Point> = self
            .vertices
            .iter()
            .filter(|(v, _)| !remove.contains(v))
            .map(|(v, p)| (*v, p.clone()))
            .collect();
        let edges: BTreeMap<EdgeKey, Polyline> = self
            .edges
            .iter()
            .filter(|(k, _)| !remove.contains(&k.lo) && !remove.contains(&k.hi))
            .map(|(k, l)| (*k, l.clone()))
            .collect();
        // Every class tag is hereditary under vertex deletion.
        let class = self.class;
        let layout = self.layout.as_ref().map(|l| l.restrict(&vertices));
        let table = OnceLock::new();
        if let Some(t) = self.table.get() {
            if t.report.is_good() {
                let _ = table.set(Arc::new(t.restrict(&vertices)));
            }
        }
        Ok(Drawing {
            class,
            vertices,
            edges,
            layout,
            table,
        })
    }

    pub fn delete(&self, remove: &[VertexId]) -> Result<Drawing> {
        self.delete_vertices(&remove.iter().copied().collect())
    }

    /// Same drawing with every point mapped by `f` (layout payload dropped).
    pub fn map_points(&self, class: ClassTag, f: impl Fn(&Point) -> Point) -> Result<Drawing> {
        let vertices = self.vertices.iter().map(|(v, p)| (*v, f(p))).collect();
        let edges = self.edges.iter().map(|(k, l)| (*k, l.map(&f))).collect();
        Drawing::new(class, vertices, edges, None)
    }

    /// Same geometry with vertex ids renamed by `rename` (must be injective).
    pub fn relabel(&self, rename: impl Fn(VertexId) -> VertexId) -> Result<Drawing> {
        let vertices = self.vertices.iter().map(|(v, p)| (rename(*v), p.clone())).collect();
        let edges = self
            .edges
            .iter()
            .map(|(k, l)| (EdgeKey::new(rename(k.lo), rename(k.hi)), l.clone()))
            .collect();
        Drawing::new(self.class, vertices, edges, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Drawing {
        Drawing::straight(
            ClassTag::Generic,
            vec![
                (VertexId(1), Point::from_ints(0, 0)),
                (VertexId(2), Point::from_ints(4, 0)),
                (VertexId(3), Point::from_ints(0, 3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn structural_checks() {
        assert!(Polyline::new(vec![Point::from_ints(0, 0), Point::from_ints(0, 0)]).is_err());
        let d = tri();
        let mut edges = d.edges().clone();
        edges.remove(&EdgeKey::of(1, 2));
        assert!(matches!(
            Drawing::new(ClassTag::Generic, d.vertices().clone(), edges, None),
            Err(Error::Structural(_))
        ));
        let mut edges = d.edges().clone();
        edges.insert(
            EdgeKey::of(1, 2),
            Polyline::segment(Point::from_ints(0, 0), Point::from_ints(9, 9)).unwrap(),
        );
        assert!(Drawing::new(ClassTag::Generic, d.vertices().clone(), edges, None).is_err());
    }

    #[test]
    fn reversed_polylines_are_normalized() {
        let d = tri();
        let mut edges = d.edges().clone();
        let flipped = edges[&EdgeKey::of(1, 2)].reversed();
        edges.insert(EdgeKey::of(1, 2), flipped);
        let d2 = Drawing::new(ClassTag::Generic, d.vertices().clone(), edges, None).unwrap();
        assert_eq!(d2.edge(&EdgeKey::of(1, 2)).unwrap().first(), &Point::from_ints(0, 0));
    }

    #[test]
    fn deletion_rules() {
        let d = tri();
        let same = d.delete(&[]).unwrap();
        assert_eq!(same.n(), 3);
        assert_eq!(same.edges(), d.edges());
        let d2 = d.delete(&[VertexId(2)]).unwrap();
        assert_eq!(d2.n(), 2);
        assert_eq!(d2.edges().len(), 1);
        assert!(matches!(
            d.delete(&[VertexId(1), VertexId(2), VertexId(3)]),
            Err(Error::Domain(_))
        ));
        assert!(d.delete(&[VertexId(7)]).is_err());
    }
}
