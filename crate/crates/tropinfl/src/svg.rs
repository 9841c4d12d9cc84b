//! Two-panel figures: the tropical curve on the left, the dual subdivision
//! of its Newton polygon on the right. Output depends only on the inputs.

use std::collections::BTreeMap;
use std::fmt::Write;

use tropinfl_core::lattice::{Direction, LatticePoint};
use tropinfl_core::tropical::{EdgeKind, RatPoint, TropicalCurve};

use crate::text::rational_to_f64;

/// Pixels per lattice unit in the dual panel.
pub const UNIT: f64 = 40.0;
/// Side of the square curve panel.
pub const PANEL: f64 = 400.0;
pub const GAP: f64 = 20.0;
pub const SHADE: &str = "#808080";

/// What to overlay for an influence figure.
#[derive(Debug, Clone)]
pub struct Overlay {
    pub apex: RatPoint,
    pub normals: Vec<Direction>,
    /// Curve vertex to multiplicity.
    pub members: BTreeMap<usize, u8>,
}

struct Viewport {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Viewport {
    /// Square fit of the points with a 10% margin on each side.
    fn fit(points: &[(f64, f64)]) -> Self {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            lo_x = lo_x.min(x);
            lo_y = lo_y.min(y);
            hi_x = hi_x.max(x);
            hi_y = hi_y.max(y);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(2.0);
        let (cx, cy) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
        let side = span * 1.2;
        Viewport { min_x: cx - side / 2.0, min_y: cy - side / 2.0, scale: PANEL / side }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.min_x) * self.scale, PANEL - (y - self.min_y) * self.scale)
    }

    /// Length in model units that surely leaves the panel.
    fn far(&self) -> f64 {
        4.0 * PANEL / self.scale
    }
}

fn xy(p: &RatPoint) -> (f64, f64) {
    (rational_to_f64(&p.x), rational_to_f64(&p.y))
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), attrs: &str) {
    writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {attrs}/>"#, a.0, a.1, b.0, b.1).unwrap();
}

fn curve_panel(out: &mut String, curve: &TropicalCurve, overlay: Option<&Overlay>) {
    let mut pts: Vec<(f64, f64)> = curve.vertices().iter().map(|v| xy(&v.position)).collect();
    if let Some(o) = overlay {
        pts.push(xy(&o.apex));
    }
    let view = Viewport::fit(&pts);
    writeln!(out, r#"<clipPath id="curve-clip"><rect x="0" y="0" width="{PANEL:.2}" height="{PANEL:.2}"/></clipPath>"#).unwrap();
    writeln!(out, r##"<g id="curve" clip-path="url(#curve-clip)">"##).unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{PANEL:.2}" height="{PANEL:.2}" fill="white" stroke="black"/>"#).unwrap();
    if let Some(o) = overlay {
        let (ax, ay) = xy(&o.apex);
        for u in &o.normals {
            // the line through the apex with normal u runs along (-u2, u1)
            let (dx, dy) = (-u.u2() as f64, u.u1() as f64);
            let far = view.far();
            let a = view.map(ax - far * dx, ay - far * dy);
            let b = view.map(ax + far * dx, ay + far * dy);
            line(out, a, b, r##"stroke="#b0b0b0" stroke-dasharray="4 3""##);
        }
    }
    for e in curve.edges() {
        let from = xy(&curve.vertices()[e.origin()].position);
        let to = match e.kind {
            EdgeKind::Bounded { to, .. } => xy(&curve.vertices()[to].position),
            EdgeKind::Ray { .. } => {
                let far = view.far();
                (from.0 + far * e.direction.x as f64, from.1 + far * e.direction.y as f64)
            }
        };
        let width = 1.5 * e.weight as f64;
        line(out, view.map(from.0, from.1), view.map(to.0, to.1), &format!(r#"stroke="black" stroke-width="{width:.2}""#));
    }
    for (i, v) in curve.vertices().iter().enumerate() {
        let (x, y) = xy(&v.position);
        let (sx, sy) = view.map(x, y);
        let fill = match overlay.and_then(|o| o.members.get(&i)) {
            Some(_) => SHADE,
            None => "black",
        };
        writeln!(out, r#"<circle cx="{sx:.2}" cy="{sy:.2}" r="3.00" fill="{fill}"/>"#).unwrap();
    }
    if let Some(o) = overlay {
        let (x, y) = xy(&o.apex);
        let (sx, sy) = view.map(x, y);
        writeln!(out, r#"<circle cx="{sx:.2}" cy="{sy:.2}" r="5.00" fill="none" stroke="red" stroke-width="2.00"/>"#).unwrap();
    }
    out.push_str("</g>\n");
}

fn dual_panel(out: &mut String, curve: &TropicalCurve, overlay: Option<&Overlay>, offset: f64) -> (f64, f64) {
    let polygon = curve.newton_polygon();
    let (lo, hi) = polygon.bounding_box();
    let width = (hi.x - lo.x) as f64 * UNIT + 2.0 * UNIT;
    let height = (hi.y - lo.y) as f64 * UNIT + 2.0 * UNIT;
    let map = |p: LatticePoint| (offset + UNIT + (p.x - lo.x) as f64 * UNIT, height - UNIT - (p.y - lo.y) as f64 * UNIT);
    let shaded: BTreeMap<usize, u8> = match overlay {
        Some(o) => o.members.iter().map(|(&v, &m)| (curve.vertices()[v].cell, m)).collect(),
        None => BTreeMap::new(),
    };
    writeln!(out, r#"<g id="dual">"#).unwrap();
    for (i, cell) in curve.subdivision().cells.iter().enumerate() {
        let pts: Vec<String> = cell.vertices.iter().map(|&p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        }).collect();
        let (fill, stroke) = match shaded.get(&i) {
            Some(2) => (SHADE, "3.00"),
            Some(_) => (SHADE, "1.00"),
            None => ("white", "1.00"),
        };
        writeln!(out, r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="{stroke}"/>"#, pts.join(" ")).unwrap();
    }
    for p in polygon.lattice_points() {
        let (x, y) = map(p);
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.00" fill="black"/>"#).unwrap();
    }
    out.push_str("</g>\n");
    (width, height)
}

/// Curve and dual subdivision side by side.
pub fn render(curve: &TropicalCurve, overlay: Option<&Overlay>) -> String {
    let mut curve_part = String::new();
    curve_panel(&mut curve_part, curve, overlay);
    let mut dual_part = String::new();
    let (w, h) = dual_panel(&mut dual_part, curve, overlay, PANEL + GAP);
    let total_w = PANEL + GAP + w;
    let total_h = PANEL.max(h);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.2}" height="{total_h:.2}" viewBox="0 0 {total_w:.2} {total_h:.2}">"#
    )
    .unwrap();
    out.push_str(&curve_part);
    out.push_str(&dual_part);
    out.push_str("</svg>\n");
    out
}
