//! Generators for the drawing families, their combinatorial crossing rules,
//! exact realizations and the class predicates.

mod classes;
mod cylindrical;
mod spherical;
mod two_page;

use std::collections::BTreeMap;

pub use classes::{is_monotone, is_x_bounded};
pub use cylindrical::{
    crossings_cylindrical, harary_hill, harary_hill_layout, realize_cylindrical, spiral_crossings,
    CylindricalLayout, Turn,
};
pub use spherical::{random_spherical, sample_mean_crossings, SphericalDrawing};
pub use two_page::{
    blazek_koman, blazek_koman_layout, crossings_two_page, random_two_page, realize_two_page, Page,
    TwoPageLayout,
};

use crate::drawing::{ClassTag, Drawing, VertexId};
use crate::error::{Error, Result};
use crate::goodness::crossing_count;
use crate::scalar::{int, Point};

/// Combinatorial payload carried by realized drawings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    TwoPage(TwoPageLayout),
    Cylindrical(CylindricalLayout),
}

impl Layout {
    /// The layout restricted to the surviving vertices.
    pub fn restrict(&self, vertices: &BTreeMap<VertexId, Point>) -> Layout {
        match self {
            Layout::TwoPage(l) => Layout::TwoPage(l.restrict(|v| vertices.contains_key(&v))),
            Layout::Cylindrical(l) => Layout::Cylindrical(l.restrict(|v| vertices.contains_key(&v))),
        }
    }

    pub fn crossings(&self) -> Result<u64> {
        match self {
            Layout::TwoPage(l) => Ok(crossings_two_page(l)),
            Layout::Cylindrical(l) => crossings_cylindrical(l),
        }
    }
}

pub const DEFAULT_RESOLUTION: u32 = 4;
const MAX_RESOLUTION: u32 = 64;

/// Realizes a layout, densifying until the realized crossing count matches
/// the combinatorial one.
pub fn realize(layout: &Layout, resolution: u32) -> Result<Drawing> {
    let expected = layout.crossings()?;
    let mut res = resolution.max(1);
    loop {
        let d = match layout {
            Layout::TwoPage(l) => realize_two_page(l, res)?,
            Layout::Cylindrical(l) => realize_cylindrical(l, res)?,
        };
        let realized = crossing_count(&d);
        match realized {
            Ok(c) if c == expected => return Ok(d),
            _ if res < MAX_RESOLUTION => res *= 2,
            Ok(c) => {
                return Err(Error::Fidelity {
                    combinatorial: expected,
                    realized: c,
                    resolution: res,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// Vertex i at `(x_i, x_i^2)` with `x_i = (i - 1) + (i - 1)^2 / (n^3 + 1)`,
/// straight edges. The integer parabola has three concurrent diagonals from
/// n = 9 on; the perturbation keeps the points in convex position.
pub fn convex(n: usize) -> Result<Drawing> {
    if n < 3 {
        return Err(Error::Domain(format!("convex drawing needs n >= 3, got {n}")));
    }
    let bump = int(n as i64).pow(3) + int(1);
    let pts = (1..=n as u32)
        .map(|i| {
            let j = i as i64 - 1;
            let x = int(j) + int(j * j) / &bump;
            (VertexId(i), Point::new(x.clone(), &x * &x))
        })
        .collect();
    Drawing::straight(ClassTag::Convex, pts)
}

pub(crate) fn require_n(n: usize, what: &str) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!("{what} needs n >= 3, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goodness::{compute_crossings_geometric, validate_good_drawing};

    #[test]
    fn convex_counts() {
        assert!(convex(2).is_err());
        for (n, c) in [(3, 0), (4, 1), (5, 5), (6, 15), (9, 126), (12, 495), (16, 1820)] {
            let d = convex(n).unwrap();
            assert!(validate_good_drawing(&d).is_good());
            assert_eq!(compute_crossings_geometric(&d).unwrap().1, c);
        }
    }

    #[test]
    fn restriction_keeps_layout_consistent() {
        let (l, d) = blazek_koman(8).unwrap();
        let sub = d.delete(&[VertexId(3), VertexId(6)]).unwrap();
        let sl = sub.layout().unwrap();
        assert_eq!(sl.crossings().unwrap(), crossing_count(&sub).unwrap());
        assert_eq!(Layout::TwoPage(l).restrict(sub.vertices()), sl.clone());

        let (_, d) = harary_hill(9).unwrap();
        let sub = d.delete(&[VertexId(1), VertexId(7)]).unwrap();
        assert_eq!(sub.layout().unwrap().crossings().unwrap(), crossing_count(&sub).unwrap());
    }
}
