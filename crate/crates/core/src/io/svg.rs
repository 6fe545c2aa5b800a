use std::fmt::Write;

use crate::vec2::Vec2;
use crate::witness::{Rule, WitnessSet};

#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Drawing units per `rho`.
    pub scale: f64,
    pub point_radius: f64,
    pub margin: f64,
    pub legend: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { scale: 100.0, point_radius: 5.0, margin: 20.0, legend: true }
    }
}

const RULES: [(Rule, &str); 7] = [
    (Rule::Base, "base"),
    (Rule::Fig1, "fig1"),
    (Rule::Fig2, "fig2"),
    (Rule::Fig3, "fig3"),
    (Rule::Fig4, "fig4"),
    (Rule::Fig5, "fig5"),
    (Rule::Memo, "memo"),
];

/// Draws a witness set, or one of its placements when `images` is given.
/// One `<line>` per edge, one `<circle>` per point; anchors carry
/// `data-anchor`.
pub fn render_svg(w: &WitnessSet, images: Option<&[Vec2]>, opts: &SvgOptions) -> String {
    let pts: Vec<Vec2> = match images {
        Some(im) => im.to_vec(),
        None => w.coords(),
    };
    let k = opts.scale / w.rho;
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &pts {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if pts.is_empty() {
        lo = Vec2::ZERO;
        hi = Vec2::ZERO;
    }
    let pad = opts.margin + opts.point_radius;
    let legend_h = if opts.legend { 18.0 } else { 0.0 };
    let width = (hi.x - lo.x) * k + 2.0 * pad;
    let height = (hi.y - lo.y) * k + 2.0 * pad + legend_h;
    // y grows downwards in SVG
    let map = |p: Vec2| ((p.x - lo.x) * k + pad, (hi.y - p.y) * k + pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    let _ = writeln!(s, r##"<g class="edges" stroke="#555" stroke-width="1">"##);
    for &[i, j] in &w.edges {
        let ((x1, y1), (x2, y2)) = (map(pts[i]), map(pts[j]));
        let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" data-edge="{i}-{j}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="points">"#);
    for (id, p) in pts.iter().enumerate() {
        let (cx, cy) = map(*p);
        let label = w.points.get(id).map_or("", |p| p.label.as_str());
        let anchor = if id == w.anchors.x {
            Some("x")
        } else if id == w.anchors.y {
            Some("y")
        } else {
            None
        };
        let r = opts.point_radius;
        match anchor {
            Some(a) => {
                let _ = writeln!(
                    s,
                    r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r}" fill="#c0392b" data-anchor="{a}" data-label="{}"/>"##,
                    escape(label)
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r}" fill="#2c3e50" data-label="{}"/>"##,
                    escape(label)
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");
    if opts.legend {
        let counts: Vec<String> = RULES
            .iter()
            .map(|&(r, name)| (name, w.trace.count(r)))
            .filter(|&(_, c)| c > 0)
            .map(|(name, c)| format!("{name}×{c}"))
            .collect();
        let text = format!(
            "{} points, {} edges, depth {}: {}",
            pts.len(),
            w.edges.len(),
            w.trace.depth(),
            counts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{pad:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            height - 6.0,
            escape(&text)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
