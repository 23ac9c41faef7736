//! Planarization of a good drawing into nodes, arcs and faces.
//!
//! Nodes are the drawing's vertices plus its crossing points; arcs are the
//! polyline pieces between consecutive nodes. Half-edge `2a` runs along arc `a`
//! in its stored direction and `2a + 1` against it; every half-edge has its face
//! on the left.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::drawing::{Drawing, EdgeKey, VertexId};
use crate::error::{Error, Result};
use crate::geom::{cmp_angle, on_segment, shoelace, winding_step, BBox};
use crate::goodness::{require_good, PolyPos};
use crate::kedges::SideTable;
use crate::scalar::{sign, zero, Point};

pub type FaceId = usize;

/// Designates a face: the unbounded one, or the face containing a reference point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceRef {
    Unbounded,
    Point(Point),
}

#[derive(Clone, Debug)]
pub struct Node {
    pub point: Point,
    pub vertex: Option<VertexId>,
}

#[derive(Clone, Debug)]
pub struct ArcPiece {
    pub edge: EdgeKey,
    pub from: usize,
    pub to: usize,
    pub points: Vec<Point>,
}

#[derive(Debug)]
pub struct Arrangement {
    nodes: Vec<Node>,
    arcs: Vec<ArcPiece>,
    /// Outgoing half-edges per node, counter-clockwise.
    rotation: Vec<Vec<usize>>,
    next: Vec<usize>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<usize>>,
    face_boxes: Vec<BBox>,
    unbounded: FaceId,
    vertex_node: BTreeMap<VertexId, usize>,
    segments: Vec<(Point, Point)>,
}

impl Arrangement {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[ArcPiece] {
        &self.arcs
    }

    pub fn unbounded_face(&self) -> FaceId {
        self.unbounded
    }

    /// Half-edges bounding `face`, in traversal order.
    pub fn face_cycle(&self, face: FaceId) -> &[usize] {
        &self.faces[face]
    }

    /// The half-edge following `h` around its face.
    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.arcs.len() as i64 + self.faces.len() as i64
    }

    fn origin(&self, h: usize) -> usize {
        let a = &self.arcs[h / 2];
        if h % 2 == 0 {
            a.from
        } else {
            a.to
        }
    }

    fn half_points(&self, h: usize) -> Box<dyn Iterator<Item = &Point> + '_> {
        let pts = &self.arcs[h / 2].points;
        if h % 2 == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        }
    }

    fn winding(&self, face: FaceId, p: &Point) -> i32 {
        let mut w = 0;
        for &h in &self.faces[face] {
            let pts: Vec<&Point> = self.half_points(h).collect();
            for s in pts.windows(2) {
                w += winding_step(s[0], s[1], p);
            }
        }
        w
    }

    /// Whether `p` lies on some arc.
    pub fn on_drawing(&self, p: &Point) -> bool {
        self.segments.iter().any(|(a, b)| on_segment(a, b, p))
    }

    pub fn locate(&self, f: &FaceRef) -> Result<FaceId> {
        let p = match f {
            FaceRef::Unbounded => return Ok(self.unbounded),
            FaceRef::Point(p) => p,
        };
        if self.on_drawing(p) || self.vertex_node.values().any(|&v| self.nodes[v].point == *p) {
            return Err(Error::AmbiguousFace);
        }
        for face in 0..self.faces.len() {
            if face == self.unbounded || !self.face_boxes[face].contains_approx(p) {
                continue;
            }
            if self.winding(face, p) != 0 {
                return Ok(face);
            }
        }
        Ok(self.unbounded)
    }

    /// Original vertices on the boundary of `face`.
    pub fn face_vertices(&self, face: FaceId) -> BTreeSet<VertexId> {
        self.faces[face]
            .iter()
            .filter_map(|&h| self.nodes[self.origin(h)].vertex)
            .collect()
    }

    /// Edge germs at vertex `v` in counter-clockwise order, each with the face
    /// that follows it counter-clockwise.
    pub fn rotation_at(&self, v: VertexId) -> Result<Vec<(VertexId, FaceId)>> {
        let node = *self.vertex_node.get(&v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.rotation[node]
            .iter()
            .map(|&h| (self.arcs[h / 2].edge.other(v), self.face_of[h]))
            .collect())
    }
}

fn direction(points: &[Point], forward: bool) -> Point {
    if forward {
        points[1].sub(&points[0])
    } else {
        let m = points.len();
        points[m - 2].sub(&points[m - 1])
    }
}

/// Planarizes a good drawing. Fails with the goodness report otherwise.
pub fn planarize(d: &Drawing) -> Result<Arrangement> {
    let table = require_good(d)?;
    let mut nodes: Vec<Node> = Vec::new();
    let mut vertex_node = BTreeMap::new();
    for (v, p) in d.vertices() {
        vertex_node.insert(*v, nodes.len());
        nodes.push(Node {
            point: p.clone(),
            vertex: Some(*v),
        });
    }

    let mut cuts: BTreeMap<EdgeKey, Vec<(PolyPos, usize)>> = BTreeMap::new();
    for ((a, b), contacts) in &table.contacts {
        if d.edge(a).is_none() || d.edge(b).is_none() {
            continue;
        }
        for c in contacts {
            let id = nodes.len();
            nodes.push(Node {
                point: c.point.clone(),
                vertex: None,
            });
            cuts.entry(*a).or_default().push((c.pos_a.clone(), id));
            cuts.entry(*b).or_default().push((c.pos_b.clone(), id));
        }
    }

    let mut arcs: Vec<ArcPiece> = Vec::new();
    let mut segments = Vec::new();
    for (key, line) in d.edges() {
        let pts = line.points();
        for s in pts.windows(2) {
            segments.push((s[0].clone(), s[1].clone()));
        }
        let mut stops = cuts.remove(key).unwrap_or_default();
        stops.sort_by(|x, y| x.0.cmp(&y.0));
        let mut from = vertex_node[&key.lo];
        let mut current = vec![pts[0].clone()];
        let mut idx = 1;
        for (pos, node) in stops {
            while idx <= pos.seg {
                current.push(pts[idx].clone());
                idx += 1;
            }
            let x = nodes[node].point.clone();
            if current.last() != Some(&x) {
                current.push(x.clone());
            }
            arcs.push(ArcPiece {
                edge: *key,
                from,
                to: node,
                points: std::mem::replace(&mut current, vec![x]),
            });
            from = node;
        }
        while idx < pts.len() {
            current.push(pts[idx].clone());
            idx += 1;
        }
        arcs.push(ArcPiece {
            edge: *key,
            from,
            to: vertex_node[&key.hi],
            points: current,
        });
    }

    let half_count = arcs.len() * 2;
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut dirs: Vec<Point> = Vec::with_capacity(half_count);
    for (i, a) in arcs.iter().enumerate() {
        dirs.push(direction(&a.points, true));
        dirs.push(direction(&a.points, false));
        rotation[a.from].push(2 * i);
        rotation[a.to].push(2 * i + 1);
    }
    let mut slot = vec![0usize; half_count];
    for out in rotation.iter_mut() {
        out.sort_by(|&x, &y| cmp_angle(&dirs[x], &dirs[y]).then(x.cmp(&y)));
        if out.windows(2).any(|w| cmp_angle(&dirs[w[0]], &dirs[w[1]]) == Ordering::Equal) {
            return Err(Error::Precondition("two arcs leave a node in the same direction".into()));
        }
        for (k, &h) in out.iter().enumerate() {
            slot[h] = k;
        }
    }
    let head = |h: usize| -> usize {
        let a = &arcs[h / 2];
        if h % 2 == 0 {
            a.to
        } else {
            a.from
        }
    };
    let mut next = vec![0usize; half_count];
    for h in 0..half_count {
        let v = head(h);
        let twin = h ^ 1;
        let out = &rotation[v];
        next[h] = out[(slot[twin] + out.len() - 1) % out.len()];
    }

    let mut face_of = vec![usize::MAX; half_count];
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for start in 0..half_count {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut cycle = Vec::new();
        let mut h = start;
        while face_of[h] == usize::MAX {
            face_of[h] = id;
            cycle.push(h);
            h = next[h];
        }
        faces.push(cycle);
    }

    let half_pts = |h: usize| -> Vec<&Point> {
        let pts = &arcs[h / 2].points;
        if h % 2 == 0 {
            pts.iter().collect()
        } else {
            pts.iter().rev().collect()
        }
    };
    let mut unbounded = None;
    let mut face_boxes = Vec::with_capacity(faces.len());
    for (f, cycle) in faces.iter().enumerate() {
        let mut area = zero();
        let mut bb = BBox::empty();
        for &h in cycle {
            let pts = half_pts(h);
            for s in pts.windows(2) {
                area += shoelace(s[0], s[1]);
            }
            for p in pts {
                bb.add(p);
            }
        }
        face_boxes.push(bb.pad());
        if sign(&area) <= 0 {
            if unbounded.is_some() {
                return Err(Error::Precondition("drawing is not connected".into()));
            }
            unbounded = Some(f);
        }
    }
    let unbounded = match unbounded {
        Some(f) => f,
        None if faces.is_empty() => {
            faces.push(Vec::new());
            face_boxes.push(BBox::empty());
            0
        }
        None => return Err(Error::Precondition("no face with noncompact closure".into())),
    };

    let arr = Arrangement {
        nodes,
        arcs,
        rotation,
        next,
        face_of,
        faces,
        face_boxes,
        unbounded,
        vertex_node,
        segments,
    };
    if arr.euler_characteristic() != 2 {
        return Err(Error::Precondition(format!(
            "Euler relation fails: {} - {} + {} != 2",
            arr.node_count(),
            arr.arc_count(),
            arr.face_count()
        )));
    }
    Ok(arr)
}

/// Original vertices on the boundary of the designated face.
pub fn boundary_vertices(a: &Arrangement, f: &FaceRef) -> Result<BTreeSet<VertexId>> {
    let face = a.locate(f)?;
    Ok(a.face_vertices(face))
}

/// The other vertices in the order in which their edges leave `x`, starting and
/// ending with the two edges that bound the designated face at `x`, oriented so
/// that `x x_1 x_{n-1}` is counter-clockwise with the designated face outside.
pub fn induced_boundary_order(d: &Drawing, x: VertexId, f: &FaceRef) -> Result<Vec<VertexId>> {
    let arr = planarize(d)?;
    let sides = SideTable::new(d, f)?;
    induced_order_in(&arr, &sides, x, f)
}

pub(crate) fn induced_order_in(
    arr: &Arrangement,
    sides: &SideTable,
    x: VertexId,
    f: &FaceRef,
) -> Result<Vec<VertexId>> {
    let face = arr.locate(f)?;
    let rot = arr.rotation_at(x)?;
    let wedges: Vec<usize> = (0..rot.len()).filter(|&k| rot[k].1 == face).collect();
    let k = match wedges.as_slice() {
        [k] => *k,
        [] => {
            return Err(Error::Precondition(format!(
                "vertex {x} is not on the boundary of the designated face"
            )))
        }
        _ => {
            return Err(Error::Precondition(format!(
                "vertex {x} meets the designated face more than once"
            )))
        }
    };
    let m = rot.len();
    let mut order: Vec<VertexId> = (1..=m).map(|j| rot[(k + j) % m].0).collect();
    if order.len() >= 2 && !sides.left(x, order[0], order[m - 1]) {
        order.reverse();
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::ClassTag;
    use crate::scalar::ratio;

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

    fn parabola(n: i64) -> Drawing {
        straight(&(0..n).map(|i| (i, i * i)).collect::<Vec<_>>())
    }

    #[test]
    fn triangle_faces() {
        let d = straight(&[(0, 0), (4, 0), (0, 4)]);
        let a = planarize(&d).unwrap();
        assert_eq!((a.node_count(), a.arc_count(), a.face_count()), (3, 3, 2));
        let b = boundary_vertices(&a, &FaceRef::Unbounded).unwrap();
        assert_eq!(b.len(), 3);
        let inner = FaceRef::Point(Point::from_ints(1, 1));
        assert_eq!(boundary_vertices(&a, &inner).unwrap().len(), 3);
        assert_ne!(a.locate(&inner).unwrap(), a.unbounded_face());
        let on_edge = FaceRef::Point(Point::from_ints(2, 0));
        assert!(matches!(a.locate(&on_edge), Err(Error::AmbiguousFace)));
    }

    #[test]
    fn convex_counts() {
        let a4 = planarize(&parabola(4)).unwrap();
        assert_eq!((a4.node_count(), a4.arc_count(), a4.face_count()), (5, 8, 5));
        let a5 = planarize(&parabola(5)).unwrap();
        assert_eq!((a5.node_count(), a5.arc_count(), a5.face_count()), (10, 20, 12));
        let hull = boundary_vertices(&a5, &FaceRef::Unbounded).unwrap();
        assert_eq!(hull.len(), 5);
    }

    #[test]
    fn bounded_faces_of_convex_k4_touch_two_vertices() {
        // Points (0,0),(1,1),(2,4),(3,9); diagonals cross at (3/2, 3).
        let d = parabola(4);
        let a = planarize(&d).unwrap();
        for f in 0..a.face_count() {
            if f == a.unbounded_face() {
                continue;
            }
            assert_eq!(a.face_vertices(f).len(), 2);
        }
        // Centroid of the triangle 1, 2, crossing.
        let inside = FaceRef::Point(Point::new(ratio(5, 6), ratio(4, 3)));
        let verts = boundary_vertices(&a, &inside).unwrap();
        assert_eq!(verts, [VertexId(1), VertexId(2)].into_iter().collect());
        let below = FaceRef::Point(Point::new(ratio(3, 2), ratio(3, 2)));
        assert_eq!(a.locate(&below).unwrap(), a.unbounded_face());
    }

    #[test]
    fn induced_order_on_triangle_and_convex() {
        let d = straight(&[(0, 0), (4, 0), (0, 4)]);
        let order = induced_boundary_order(&d, VertexId(1), &FaceRef::Unbounded).unwrap();
        assert_eq!(order, vec![VertexId(2), VertexId(3)]);

        let d = parabola(4);
        let order = induced_boundary_order(&d, VertexId(1), &FaceRef::Unbounded).unwrap();
        // Hull neighbors of vertex 1 are 2 and 4.
        assert_eq!(order.len(), 3);
        let ends: BTreeSet<_> = [order[0], order[2]].into_iter().collect();
        assert_eq!(ends, [VertexId(2), VertexId(4)].into_iter().collect());
        assert_eq!(order[1], VertexId(3));
    }

    #[test]
    fn interior_vertex_is_rejected() {
        let d = straight(&[(0, 0), (10, 0), (0, 10), (2, 2)]);
        let err = induced_boundary_order(&d, VertexId(4), &FaceRef::Unbounded).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
