//! Minimal SVG rendering of a 2-d polytope and its lattice points.

use std::fmt::Write as _;

use toric_gcd::rational::{to_f64, Rational};

const SCALE: f64 = 40.0;
const MARGIN: f64 = 1.0;

/// Vertices in counterclockwise order around their centroid.
fn cyclic(vertices: &[Vec<Rational>]) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = vertices.iter().map(|v| (to_f64(&v[0]), to_f64(&v[1]))).collect();
    let n = pts.len().max(1) as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut pts = pts;
    pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    pts
}

pub fn render(vertices: &[Vec<Rational>], lattice_points: &[Vec<i64>]) -> String {
    let pts = cyclic(vertices);
    let xs = pts.iter().map(|p| p.0);
    let ys = pts.iter().map(|p| p.1);
    let (min_x, max_x) = (xs.clone().fold(0.0, f64::min) - MARGIN, xs.fold(0.0, f64::max) + MARGIN);
    let (min_y, max_y) = (ys.clone().fold(0.0, f64::min) - MARGIN, ys.fold(0.0, f64::max) + MARGIN);
    let (w, h) = ((max_x - min_x) * SCALE, (max_y - min_y) * SCALE);
    // y grows downward in SVG
    let to_screen = |x: f64, y: f64| ((x - min_x) * SCALE, (max_y - y) * SCALE);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#);
    let (ox, oy) = to_screen(0.0, 0.0);
    let _ = writeln!(out, r##"  <line x1="0" y1="{oy:.1}" x2="{w:.1}" y2="{oy:.1}" stroke="#999"/>"##);
    let _ = writeln!(out, r##"  <line x1="{ox:.1}" y1="0" x2="{ox:.1}" y2="{h:.1}" stroke="#999"/>"##);
    let points: Vec<String> = pts
        .iter()
        .map(|&(x, y)| {
            let (sx, sy) = to_screen(x, y);
            format!("{sx:.1},{sy:.1}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"  <polygon points="{}" fill="#cde" stroke="#246" stroke-width="2"/>"##,
        points.join(" ")
    );
    for p in lattice_points {
        let (sx, sy) = to_screen(p[0] as f64, p[1] as f64);
        let _ = writeln!(out, r##"  <circle cx="{sx:.1}" cy="{sy:.1}" r="3" fill="#222"/>"##);
    }
    out.push_str("</svg>\n");
    out
}
