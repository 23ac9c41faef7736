//! Static SVG rendering. Presentation only; nothing reads these files back.

use std::fmt::Write;

use crate::drawing::Drawing;
use crate::error::Result;
use crate::goodness::compute_crossings_geometric;
use crate::scalar::Point;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn new(d: &Drawing) -> Frame {
        let b = d.bbox();
        let (x0, x1, y0, y1) = (b.lo[0], b.hi[0], b.lo[1], b.hi[1]);
        let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        Frame {
            x0,
            y1,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn at(&self, p: &Point) -> String {
        let [px, py] = p.approx();
        let x = MARGIN + (px - self.x0) * self.scale;
        let y = MARGIN + (self.y1 - py) * self.scale;
        format!("{} {}", fixed(x), fixed(y))
    }
}

/// Four decimals, with "-0.0000" normalized.
fn fixed(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Vertices as labeled circles, edges as paths, crossings (optionally) as
/// small squares. Byte-identical for identical input.
pub fn export_svg(d: &Drawing, mark_crossings: bool) -> Result<String> {
    let frame = Frame::new(d);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<g class="edges" fill="none" stroke="black" stroke-width="1">"#).unwrap();
    for (key, line) in d.edges() {
        let mut path = String::new();
        for (i, p) in line.points().iter().enumerate() {
            path.push_str(if i == 0 { "M " } else { " L " });
            path.push_str(&frame.at(p));
        }
        writeln!(out, r#"<path id="e{}-{}" d="{path}"/>"#, key.lo.0, key.hi.0).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if mark_crossings {
        let (records, _) = compute_crossings_geometric(d)?;
        writeln!(out, r#"<g class="crossings" fill="red">"#).unwrap();
        for r in &records {
            let c = frame.at(&r.point);
            let (x, y) = c.split_once(' ').unwrap();
            let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="6.0000" height="6.0000"/>"#,
                fixed(x - 3.0),
                fixed(y - 3.0)
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, r#"<g class="vertices" fill="white" stroke="black">"#).unwrap();
    for (v, p) in d.vertices() {
        let c = frame.at(p);
        let (x, y) = c.split_once(' ').unwrap();
        writeln!(out, r#"<circle cx="{x}" cy="{y}" r="8"/>"#).unwrap();
        writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-size="10" text-anchor="middle" dominant-baseline="central" stroke="none" fill="black">{}</text>"#,
            v.0
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{blazek_koman, convex};

    #[test]
    fn element_counts() {
        let s = export_svg(&convex(3).unwrap(), true).unwrap();
        assert_eq!((s.matches("<circle").count(), s.matches("<path").count()), (3, 3));
        let (_, bk) = blazek_koman(8).unwrap();
        let s = export_svg(&bk, true).unwrap();
        assert_eq!(s.matches("<circle").count(), 8);
        assert_eq!(s.matches("<path").count(), 28);
        assert_eq!(s.matches("<rect").count(), 18);
        assert_eq!(s, export_svg(&bk, true).unwrap());
        assert_eq!(export_svg(&bk, false).unwrap().matches("<rect").count(), 0);
    }
}
