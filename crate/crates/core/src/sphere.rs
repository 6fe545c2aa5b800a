//! Intersections of norm spheres and the sphere-matching map used to find
//! a second equilateral pair with a prescribed sum offset.
//!
//! Every sphere is traced by angle, `theta -> c + r u(theta) / n(u(theta))`,
//! which turns each intersection into a one-dimensional bracketed solve.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::SphereError;
use crate::norm::Norm2;
use crate::roots;
use crate::tol;
use crate::vec2::Vec2;

/// Orientation of a point relative to the directed line `a -> b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Positive determinant `det(b - a, p - a)`.
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn from_sign(s: f64) -> Side {
        if s >= 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

pub fn side_of_line(a: Vec2, b: Vec2, p: Vec2) -> Result<Side, SphereError> {
    if a == b {
        return Err(SphereError::SameCenter);
    }
    let det = (b - a).cross(p - a);
    if det.abs() <= tol::COLLINEAR * (b - a).euclid() * (p - a).euclid() || det == 0.0 {
        return Err(SphereError::Collinear(p));
    }
    Ok(Side::from_sign(det))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Intersection {
    pub point: Vec2,
    /// Set when the spheres only touch; the point is then on the line of centers.
    pub tangent: bool,
}

/// Finds `c` with `n(c - a) = r1`, `n(c - b) = r2` on the requested side of `a -> b`.
///
/// For strictly convex norms the answer on each side is unique.
pub fn sphere_intersect(
    n: &Norm2,
    a: Vec2,
    r1: f64,
    b: Vec2,
    r2: f64,
    side: Side,
    tol: f64,
) -> Result<Intersection, SphereError> {
    if a == b {
        return Err(SphereError::SameCenter);
    }
    let ab = b - a;
    let dist = n.eval(ab);
    let lo = (r1 - r2).abs();
    let hi = r1 + r2;
    if dist > hi + tol::TANGENCY || dist < lo - tol::TANGENCY {
        return Err(SphereError::Infeasible { dist, gap_lo: lo, gap_hi: hi });
    }
    let (point, tangent) = try_intersect_tangent(n, a, r1, b, r2, side).expect("feasible by the test above");
    if tangent {
        return Ok(Intersection { point, tangent });
    }
    let res = (n.dist(point, a) - r1).abs().max((n.dist(point, b) - r2).abs());
    if !(res <= tol) {
        return Err(SphereError::NoConvergence(res));
    }
    Ok(Intersection { point, tangent: false })
}

/// Solves the non-degenerate case without residual checks. The caller
/// guarantees `|r1 - r2| < n(b - a) < r1 + r2`.
#[inline]
pub(crate) fn intersect_generic(n: &Norm2, a: Vec2, r1: f64, b: Vec2, r2: f64, side: Side) -> Vec2 {
    let alpha = (b - a).angle();
    let s = side.sign();
    let phi = |t: f64| n.eval(a + n.sphere_point(r1, alpha + s * t) - b) - r2;
    let (f0, f1) = (phi(0.0), phi(PI));
    let t = roots::bracketed(phi, 0.0, PI, f0, f1);
    a + n.sphere_point(r1, alpha + s * t)
}

/// Fast variant for search loops: returns `None` instead of an error and
/// skips the residual check.
#[inline]
pub(crate) fn try_intersect(n: &Norm2, a: Vec2, r1: f64, b: Vec2, r2: f64, side: Side) -> Option<Vec2> {
    try_intersect_tangent(n, a, r1, b, r2, side).map(|(p, _)| p)
}

/// Like [`try_intersect`], also reporting whether the spheres touch.
#[inline]
pub(crate) fn try_intersect_tangent(
    n: &Norm2,
    a: Vec2,
    r1: f64,
    b: Vec2,
    r2: f64,
    side: Side,
) -> Option<(Vec2, bool)> {
    if a == b {
        return None;
    }
    let ab = b - a;
    let dist = n.eval(ab);
    let lo = (r1 - r2).abs();
    let hi = r1 + r2;
    if dist > hi + tol::TANGENCY || dist < lo - tol::TANGENCY {
        return None;
    }
    // the two tests above and these two partition the line, even under rounding
    if dist >= hi - tol::TANGENCY {
        return Some((a + ab * (r1 / dist), true));
    }
    if dist <= lo + tol::TANGENCY {
        let dir = if r1 >= r2 { 1.0 } else { -1.0 };
        return Some((a + ab * (dir * r1 / dist), true));
    }
    Some((intersect_generic(n, a, r1, b, r2, side), false))
}

/// A reference pair `a, b` on the sphere of radius `d` with `n(a - b) = d`.
/// The sign of `det(a, b)` fixes the orientation of the matching map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedFrame {
    pub a: Vec2,
    pub b: Vec2,
    pub d: f64,
}

impl OrientedFrame {
    pub fn new(n: &Norm2, a: Vec2, b: Vec2, d: f64, tol: f64) -> Result<Self, SphereError> {
        let res = [n.eval(a), n.eval(b), n.dist(a, b)]
            .into_iter()
            .map(|v| (v - d).abs())
            .fold(0.0, f64::max);
        if !(res <= tol) || !(d > 0.0) {
            return Err(SphereError::BadFrame(res));
        }
        if a.cross(b) == 0.0 {
            return Err(SphereError::Collinear(b));
        }
        Ok(Self { a, b, d })
    }

    /// Frame with `a` in direction `theta` and `b` its left-hand neighbour.
    pub fn from_direction(n: &Norm2, d: f64, theta: f64) -> Result<Self, SphereError> {
        let a = n.sphere_point(d, theta);
        let b = sphere_intersect(n, Vec2::ZERO, d, a, d, Side::Left, tol::CONSTRUCTION)?.point;
        Self::new(n, a, b, d, tol::CONSTRUCTION)
    }

    pub fn orientation(&self) -> Side {
        Side::from_sign(self.a.cross(self.b))
    }

    fn on_sphere(&self, n: &Norm2, u: Vec2) -> Result<(), SphereError> {
        if (n.eval(u) - self.d).abs() <= tol::CONSTRUCTION * self.d.max(1.0) {
            Ok(())
        } else {
            Err(SphereError::NotOnSphere(u, self.d))
        }
    }
}

/// The unique `h(u)` on the sphere with `n(u - h(u)) = d` whose orientation
/// `det(u, h(u))` agrees with `det(a, b)`.
pub fn h_map(frame: &OrientedFrame, n: &Norm2, u: Vec2) -> Result<Vec2, SphereError> {
    frame.on_sphere(n, u)?;
    if u == frame.a {
        return Ok(frame.b);
    }
    let side = frame.orientation();
    Ok(sphere_intersect(n, Vec2::ZERO, frame.d, u, frame.d, side, tol::CONSTRUCTION)?.point)
}

/// `g(u) = n(u + h(u) - a - h(a))`.
pub fn pair_sum_gap(frame: &OrientedFrame, n: &Norm2, u: Vec2) -> Result<f64, SphereError> {
    let hu = h_map(frame, n, u)?;
    Ok(n.eval(u + hu - frame.a - frame.b))
}

/// Grid used to locate the first crossing of `g = d` before refining it.
const ARC_GRID: usize = 256;

/// Finds `(a~, b~)` with `n(a~) = n(b~) = n(a~ - b~) = n(a~ + b~ - a - b) = d`
/// and `b~ = h(a~)`.
///
/// Walks the half-sphere arc from `a` to `-a` through `b`'s side; `g` is 0 at
/// `a` and at least `2d` at `-a`, so it crosses `d`. The crossing nearest to
/// `a` is returned; other crossings may exist further along the arc.
pub fn find_second_pair(frame: &OrientedFrame, n: &Norm2) -> Result<(Vec2, Vec2), SphereError> {
    let d = frame.d;
    let base = frame.a.angle();
    let s = frame.orientation().sign();
    let side = frame.orientation();
    let point = |t: f64| n.sphere_point(d, base + s * PI * t);
    let gap = |t: f64| -> f64 {
        let u = point(t);
        match try_intersect(n, Vec2::ZERO, d, u, d, side) {
            Some(hu) => n.eval(u + hu - frame.a - frame.b) - d,
            None => f64::NAN,
        }
    };
    let mut prev_t = 0.0;
    let mut prev_g = -d;
    let mut max_g = f64::NEG_INFINITY;
    for k in 1..=ARC_GRID {
        let t = k as f64 / ARC_GRID as f64;
        let g = gap(t);
        if g.is_nan() {
            continue;
        }
        max_g = max_g.max(g + d);
        if g >= 0.0 {
            let t = roots::bracketed(gap, prev_t, t, prev_g, g);
            let at = point(t);
            let bt = h_map(frame, n, at)?;
            return Ok((at, bt));
        }
        prev_t = t;
        prev_g = g;
    }
    Err(SphereError::NoBracket(max_g))
}
