//! Deterministic SVG rendering of plane tropical curves.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::ground::q_to_f64;
use num_traits::ToPrimitive;

use super::hypersurface::PolyhedralComplex;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Renders a curve in a fixed 600x600 viewport. Rays are drawn to the edge
/// of the frame; weights above 1 are labelled.
pub fn render_svg(c: &PolyhedralComplex) -> Result<String> {
    if c.ambient_dim != 2 {
        return Err(Error::DimensionUnsupported(format!("SVG output needs 2 coordinates, got {}", c.ambient_dim)));
    }
    let pts: Vec<(f64, f64)> = c.vertices.iter().map(|v| (q_to_f64(&v[0]), q_to_f64(&v[1]))).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1.0);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let half = span; // leaves room for rays on every side
    let scale = (SIZE - 2.0 * MARGIN) / (2.0 * half);
    let map = |x: f64, y: f64| (MARGIN + (x - cx + half) * scale, SIZE - MARGIN - (y - cy + half) * scale);
    let reach = 4.0 * half;
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600">"#).unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="600" height="600" fill="white"/>"#).unwrap();
    for cell in &c.cells {
        let (a, b, mid) = if cell.vertices.len() >= 2 {
            let (p, q) = (pts[cell.vertices[0]], pts[cell.vertices[1]]);
            (p, q, ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0))
        } else {
            let p = pts[cell.vertices[0]];
            let r = &c.rays[cell.rays[0]];
            let (dx, dy) = (r[0].to_f64().unwrap_or(0.0), r[1].to_f64().unwrap_or(0.0));
            let len = (dx * dx + dy * dy).sqrt();
            let q = (p.0 + dx / len * reach, p.1 + dy / len * reach);
            (p, q, (p.0 + dx / len * half / 2.0, p.1 + dy / len * half / 2.0))
        };
        let (ax, ay) = map(a.0, a.1);
        let (bx, by) = map(b.0, b.1);
        writeln!(s, r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}" stroke="black" stroke-width="{}"/>"#, 1 + cell.weight).unwrap();
        if cell.weight > 1 {
            let (mx, my) = map(mid.0, mid.1);
            writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="14">{}</text>"#, mx + 6.0, my - 6.0, cell.weight).unwrap();
        }
    }
    for &(x, y) in &pts {
        let (px, py) = map(x, y);
        writeln!(s, r#"<circle cx="{px:.3}" cy="{py:.3}" r="4" fill="black"/>"#).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
