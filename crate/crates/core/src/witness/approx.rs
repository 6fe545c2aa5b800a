use super::build::Builder;
use super::{Rule, TraceNode, WitnessSet};
use crate::error::BuildError;
use crate::norm::Norm2;
use crate::rational::Rational;
use crate::sphere::{sphere_intersect, Side};
use crate::tol;
use crate::vec2::Vec2;

/// Picks `(q, r)` with `r <= eps / (2 rho)` and `|q - dist| <= r`, where
/// `dist = n(x - y) / rho`: `r = 1/N` for the smallest admissible `N`, `q` the
/// first continued-fraction convergent of `dist` that is close enough.
pub(crate) fn choose_ratios(dist: f64, eps: f64, rho: f64) -> (Rational, Rational) {
    let big_n = (2.0 * rho / eps).ceil().max(1.0) as u64;
    let r = Rational::new(1, big_n).expect("N >= 1");
    let rf = r.to_f64();
    if dist <= 2.0 * rf {
        return (r, r);
    }
    let q = Rational::convergents(dist, big_n, 64)
        .into_iter()
        .find(|q| (q.to_f64() - dist).abs() <= rf && q.to_f64() >= rf)
        .unwrap_or_else(|| Rational::new((dist * big_n as f64).round() as u64, big_n).expect("N >= 1"));
    (q, r)
}

/// Approximate witness set `S_xz ∪ S_zy`: any injective `rho`-preserving map
/// keeps `n(f(x) - f(y))` within `eps` of `n(x - y)`.
pub fn approx_set(x: Vec2, y: Vec2, eps: f64, rho: f64, norm: &Norm2) -> Result<WitnessSet, BuildError> {
    if !(eps > 0.0) {
        return Err(BuildError::BadEps(eps));
    }
    let mut b = Builder::new(norm, rho)?;
    let target = norm.dist(x, y);
    let xi = b.add_point(x, "x");
    let yi = b.add_point(y, "y");
    let mut trace = TraceNode::leaf(Rule::Fig4, [xi, yi], None);
    if xi != yi {
        let (q, r) = choose_ratios(target / rho, eps, rho);
        let z = sphere_intersect(norm, x, q.to_f64() * rho, y, r.to_f64() * rho, Side::Left, tol::CONSTRUCTION)
            .map_err(|source| BuildError::Sphere { rule: "fig4", source })?
            .point;
        let zi = b.add_point(z, "z");
        trace.note = Some(format!("q={q} r={r}"));
        trace.children.push(b.segment(xi, zi, q, 1)?);
        trace.children.push(b.segment(zi, yi, r, 1)?);
    }
    let mut w = b.finish(xi, yi, target, trace);
    w.approximate = true;
    w.eps = Some(eps);
    Ok(w)
}
