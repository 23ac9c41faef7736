use std::collections::BTreeSet;

use crate::drawing::Drawing;
use crate::error::{Error, Result};

fn distinct_xs(d: &Drawing) -> Result<()> {
    let xs: BTreeSet<_> = d.vertices().values().map(|p| &p.x).collect();
    if xs.len() != d.n() {
        return Err(Error::Precondition(
            "two vertices share an x-coordinate, so the x-order is undefined".into(),
        ));
    }
    Ok(())
}

/// Every edge meets each vertical line at most once.
pub fn is_monotone(d: &Drawing) -> Result<bool> {
    distinct_xs(d)?;
    let monotone = d.edges().values().all(|line| {
        let pts = line.points();
        // Edges run from the lower id; direction of travel in x may be either way.
        let up = pts.windows(2).all(|w| w[0].x < w[1].x);
        let down = pts.windows(2).all(|w| w[0].x > w[1].x);
        up || down
    });
    if monotone {
        assert!(x_bounded(d), "monotone drawing that is not x-bounded");
    }
    Ok(monotone)
}

/// Every edge stays in the closed vertical strip spanned by its endpoints.
pub fn is_x_bounded(d: &Drawing) -> Result<bool> {
    distinct_xs(d)?;
    Ok(x_bounded(d))
}

fn x_bounded(d: &Drawing) -> bool {
    d.edges().values().all(|line| {
        let (a, b) = (&line.first().x, &line.last().x);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        line.points().iter().all(|p| *lo <= p.x && p.x <= *hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{blazek_koman, convex};
    use crate::drawing::{ClassTag, EdgeKey, Polyline, VertexId};
    use crate::scalar::Point;
    use std::collections::BTreeMap;

    #[test]
    fn predicates() {
        let (_, d) = blazek_koman(8).unwrap();
        assert!(is_monotone(&d).unwrap());
        assert!(is_x_bounded(&d).unwrap());
        assert!(is_x_bounded(&convex(6).unwrap()).unwrap());
        assert!(is_monotone(&convex(6).unwrap()).unwrap());

        // An S-shaped edge doubling back in x, still inside the strip.
        let p = |x, y| Point::from_ints(x, y);
        let vertices: BTreeMap<_, _> = [(VertexId(1), p(0, 0)), (VertexId(2), p(10, 0)), (VertexId(3), p(5, 20))]
            .into_iter()
            .collect();
        let mut edges = BTreeMap::new();
        edges.insert(EdgeKey::of(1, 2), Polyline::new(vec![p(0, 0), p(6, -1), p(4, -2), p(10, 0)]).unwrap());
        edges.insert(EdgeKey::of(1, 3), Polyline::segment(p(0, 0), p(5, 20)).unwrap());
        edges.insert(EdgeKey::of(2, 3), Polyline::segment(p(10, 0), p(5, 20)).unwrap());
        let d = Drawing::new(ClassTag::Generic, vertices, edges, None).unwrap();
        assert!(!is_monotone(&d).unwrap());
        assert!(is_x_bounded(&d).unwrap());
    }

    #[test]
    fn duplicate_x_is_rejected() {
        let d = Drawing::straight(
            ClassTag::Generic,
            vec![
                (VertexId(1), Point::from_ints(0, 0)),
                (VertexId(2), Point::from_ints(0, 1)),
                (VertexId(3), Point::from_ints(1, 0)),
            ],
        )
        .unwrap();
        assert!(is_monotone(&d).is_err());
        assert!(is_x_bounded(&d).is_err());
    }
}
