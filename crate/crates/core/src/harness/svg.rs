use std::fmt::Write as _;

use crate::geometry::{PointSet, SegPair};
use crate::tree::Sst;

/// What to draw on top of the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Overlay {
    #[default]
    None,
    Tree(Sst),
    /// Two segments, drawn highlighted.
    Crossing(SegPair),
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// A standalone SVG document. Output depends only on the inputs.
pub fn emit_svg(points: &PointSet, overlay: &Overlay) -> String {
    let pts = points.points();
    let (min_x, max_x) = (pts.iter().map(|p| p.x).min().unwrap_or(0), pts.iter().map(|p| p.x).max().unwrap_or(0));
    let (min_y, max_y) = (pts.iter().map(|p| p.y).min().unwrap_or(0), pts.iter().map(|p| p.y).max().unwrap_or(0));
    let span = ((max_x - min_x).max(max_y - min_y)).max(1) as f64;
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // SVG y grows downwards; flip so the drawing matches the coordinates.
    let at = |i: usize| {
        let p = pts[i];
        (MARGIN + (p.x - min_x) as f64 * scale, SIZE - MARGIN - (p.y - min_y) as f64 * scale)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let mut line = |a: usize, b: usize, color: &str, width: f64| {
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        let _ = writeln!(
            out,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="{width}"/>"#
        );
    };
    match overlay {
        Overlay::None => {}
        Overlay::Tree(tree) => {
            for (a, b) in tree.edges().into_iter().filter(|&(a, b)| a < pts.len() && b < pts.len()) {
                line(a, b, "#1f4e9c", 2.0);
            }
        }
        Overlay::Crossing(sp) => {
            line(sp.a, sp.b, "#c0392b", 3.0);
            line(sp.c, sp.d, "#c0392b", 3.0);
        }
    }
    for i in 0..pts.len() {
        let (x, y) = at(i);
        let _ = writeln!(out, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="5" fill="black"/>"#);
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="14">{i}</text>"#,
            x + 8.0,
            y - 8.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn pentagon() -> PointSet {
        PointSet::new([(0, 0), (10, 1), (12, 9), (3, 11), (-4, 5)].into_iter().map(Point::from).collect()).unwrap()
    }

    #[test]
    fn points_only() {
        let svg = emit_svg(&pentagon(), &Overlay::None);
        assert_eq!(svg.matches("<circle").count(), 5);
        assert_eq!(svg.matches("<line").count(), 0);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn star_overlay_draws_n_minus_one_segments() {
        let svg = emit_svg(&pentagon(), &Overlay::Tree(Sst::star(5, 2)));
        assert_eq!(svg.matches("<line").count(), 4);
    }

    #[test]
    fn deterministic() {
        let overlay = Overlay::Crossing(SegPair { a: 0, b: 2, c: 1, d: 3 });
        assert_eq!(emit_svg(&pentagon(), &overlay), emit_svg(&pentagon(), &overlay));
        assert_eq!(emit_svg(&pentagon(), &overlay).matches("#c0392b").count(), 2);
    }
}
