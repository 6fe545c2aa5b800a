//! Browser bindings: build a witness set, draw the eleven-point
//! configuration, and search for equidistant points, all as SVG strings.

use std::f64::consts::TAU;
use std::fmt::Write;

use wasm_bindgen::prelude::*;
use witness_core::io::{render_svg, SvgOptions};
use witness_core::verify::equilateral_search;
use witness_core::witness::{build_rational, figure5_config, Figure5Options};
use witness_core::{Norm2, Rational, Vec2};

fn norm(flag: &str) -> Result<Norm2, String> {
    Norm2::from_flag(flag.trim()).map_err(|e| e.to_string())
}

fn scaled(max_extent: f64) -> SvgOptions {
    SvgOptions { scale: (360.0 / max_extent.max(0.5)).min(160.0), ..SvgOptions::default() }
}

/// Witness set for anchors `q*rho` apart along the first axis.
pub fn witness_svg(q: &str, norm_flag: &str, rho: f64) -> Result<String, String> {
    let q: Rational = q.trim().parse().map_err(|e: witness_core::error::BuildError| e.to_string())?;
    let n = norm(norm_flag)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(format!("rho must be positive, got {rho}"));
    }
    let y = n.sphere_point(q.to_f64() * rho, 0.0);
    let w = build_rational(Vec2::ZERO, y, q, rho, &n).map_err(|e| e.to_string())?;
    let extent = w.points.iter().map(|p| p.xy.x.abs().max(p.xy.y.abs())).fold(0.0, f64::max);
    Ok(render_svg(&w, None, &scaled(extent)))
}

/// The eleven-point configuration with `y` at distance 2 from `x` in direction `angle`.
pub fn figure5_svg(norm_flag: &str, angle: f64) -> Result<String, String> {
    let n = norm(norm_flag)?;
    let w = figure5_config(Vec2::ZERO, n.sphere_point(2.0, angle), &n, &Figure5Options::default())
        .map_err(|e| e.to_string())?;
    Ok(render_svg(&w, None, &scaled(2.5)))
}

/// Best `n`-point near-equidistant set at distance 1, drawn with the unit
/// sphere around every point.
pub fn equilateral_svg(norm_flag: &str, n_points: usize, restarts: u32, seed: u32) -> Result<String, String> {
    let n = norm(norm_flag)?;
    let r = equilateral_search(&n, 1.0, n_points, restarts as u64, seed as u64).map_err(|e| e.to_string())?;
    let c = r.best_points.iter().fold(Vec2::ZERO, |s, p| s + *p) / r.best_points.len() as f64;
    let pts: Vec<Vec2> = r.best_points.iter().map(|p| *p - c).collect();
    let (scale, half) = (90.0, 240.0);
    let tx = |p: Vec2| (half + scale * p.x, half - scale * p.y);
    let mut s = String::new();
    let size = 2.0 * half;
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{}" viewBox="0 0 {size} {}">"#, size + 24.0, size + 24.0).unwrap();
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n");
    let ball: Vec<Vec2> = (0..180).map(|k| n.sphere_point(1.0, TAU * k as f64 / 180.0)).collect();
    for p in &pts {
        let path: Vec<String> = ball
            .iter()
            .map(|b| {
                let (x, y) = tx(*p + *b);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(s, r##"<polygon points="{}" fill="none" stroke="#9bc" stroke-width="1"/>"##, path.join(" ")).unwrap();
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let ((x1, y1), (x2, y2)) = (tx(pts[i]), tx(pts[j]));
            let off = (n.dist(pts[i], pts[j]) - 1.0).abs() > 1e-6;
            let color = if off { "#c33" } else { "#333" };
            writeln!(s, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}"/>"##).unwrap();
        }
    }
    for p in &pts {
        let (x, y) = tx(*p);
        writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#222"/>"##).unwrap();
    }
    writeln!(
        s,
        r#"<text x="8" y="{}" font-family="sans-serif" font-size="13">{} points, max |n(p_i - p_j) - 1| = {:.3e}</text>"#,
        size + 16.0,
        pts.len(),
        r.best_residual
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

#[wasm_bindgen(js_name = witnessSvg)]
pub fn witness_svg_js(q: &str, norm_flag: &str, rho: f64) -> Result<String, JsError> {
    witness_svg(q, norm_flag, rho).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = figure5Svg)]
pub fn figure5_svg_js(norm_flag: &str, angle: f64) -> Result<String, JsError> {
    figure5_svg(norm_flag, angle).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = equilateralSvg)]
pub fn equilateral_svg_js(norm_flag: &str, n_points: usize, restarts: u32, seed: u32) -> Result<String, JsError> {
    equilateral_svg(norm_flag, n_points, restarts, seed).map_err(|e| JsError::new(&e))
}
