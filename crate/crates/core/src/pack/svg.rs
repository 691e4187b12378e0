use std::fmt::Write;

use super::CirclePacking;

/// What to draw besides the circles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SvgOptions {
    /// Circle to fill; ignored when out of range.
    pub root: Option<usize>,
    /// Draw a segment between the centers of every tangent pair.
    pub edges: bool,
}

/// SVG drawing of the packing: one `<circle>` per vertex, optionally the tangency
/// graph as `<line>`s. Output depends only on the inputs.
pub fn to_svg(p: &CirclePacking, options: &SvgOptions) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (c, r) in p.centers.iter().zip(&p.radii) {
        x0 = x0.min(c[0] - r);
        y0 = y0.min(c[1] - r);
        x1 = x1.max(c[0] + r);
        y1 = y1.max(c[1] + r);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = w.max(h) / 1000.0;
    let root = options.root.filter(|&v| v < p.radii.len());
    let mut out = String::new();
    // SVG's y axis points down; flip so the drawing keeps its orientation.
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {} {w} {h}" width="800" height="{}">"#,
        -y1,
        (800.0 * h / w).round()
    );
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="{stroke}">"#);
    for (v, (c, r)) in p.centers.iter().zip(&p.radii).enumerate() {
        if Some(v) == root {
            continue;
        }
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}"/>"#, c[0], -c[1], r);
    }
    let _ = writeln!(out, "</g>");
    if let Some(v) = root {
        let (c, r) = (p.centers[v], p.radii[v]);
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="tomato" stroke="black" stroke-width="{stroke}"/>"#,
            c[0], -c[1], r
        );
    }
    if options.edges {
        let _ = writeln!(out, r#"<g stroke="steelblue" stroke-width="{stroke}">"#);
        for &(u, v) in p.graph().edges() {
            let (a, b) = (p.centers[u], p.centers[v]);
            let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, a[0], -a[1], b[0], -b[1]);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
