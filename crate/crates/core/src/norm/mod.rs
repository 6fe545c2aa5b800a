//! Norms on the real plane.
//!
//! Three families are supported: `p`-norms (including `p = 1` and `p = inf`),
//! polygonal norms whose unit ball is a centrally symmetric convex polygon, and
//! blends `(1 - lambda) * base + lambda * euclid`. Blending with a positive
//! weight always yields a strictly convex norm, which is how arbitrary norms
//! are approximated by strictly convex ones.

mod scan;
mod spec;

pub use scan::{check_star_condition, star_scan, strict_convexity_scan, ConvexityReport, StarReport};
pub use spec::{Exponent, NormSpec};

use serde::{Deserialize, Serialize};

use crate::error::NormError;
use crate::vec2::Vec2;

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    P(f64),
    Polygon { facets: Vec<Vec2> },
    Blend { base: Box<Norm2>, lambda: f64 },
}

/// An evaluatable norm on the plane together with the descriptor it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpec", into = "NormSpec")]
pub struct Norm2 {
    spec: NormSpec,
    kind: Kind,
    strictly_convex: bool,
}

impl Norm2 {
    /// Validates a descriptor and precomputes what evaluation needs.
    pub fn new(spec: NormSpec) -> Result<Self, NormError> {
        match &spec {
            NormSpec::P { p } => {
                let p = p.value();
                if !(p >= 1.0) {
                    return Err(NormError::BadExponent(p));
                }
                Ok(Self {
                    strictly_convex: p > 1.0 && p.is_finite(),
                    kind: Kind::P(p),
                    spec,
                })
            }
            NormSpec::Polygonal { vertices } => {
                let facets = polygon_facets(vertices)?;
                Ok(Self {
                    kind: Kind::Polygon { facets },
                    strictly_convex: false,
                    spec,
                })
            }
            NormSpec::Blend { base, lambda } => {
                if !(0.0..=1.0).contains(lambda) {
                    return Err(NormError::BadLambda(*lambda));
                }
                let base = Norm2::new((**base).clone())?;
                Ok(Self {
                    strictly_convex: *lambda > 0.0 || base.strictly_convex,
                    kind: Kind::Blend {
                        base: Box::new(base),
                        lambda: *lambda,
                    },
                    spec,
                })
            }
        }
    }

    pub fn p(p: f64) -> Result<Self, NormError> {
        Self::new(NormSpec::P { p: Exponent(p) })
    }

    pub fn euclidean() -> Self {
        Self::p(2.0).expect("p = 2 is valid")
    }

    pub fn chebyshev() -> Self {
        Self::p(f64::INFINITY).expect("p = inf is valid")
    }

    pub fn taxicab() -> Self {
        Self::p(1.0).expect("p = 1 is valid")
    }

    pub fn polygonal(vertices: Vec<Vec2>) -> Result<Self, NormError> {
        Self::new(NormSpec::Polygonal { vertices })
    }

    pub fn blend(base: &Norm2, lambda: f64) -> Result<Self, NormError> {
        Self::new(NormSpec::Blend {
            base: Box::new(base.spec.clone()),
            lambda,
        })
    }

    /// Parses the compact flag syntax: `p:2`, `p:inf`, `poly:x,y;x,y;...`,
    /// `poly:@file.json`, `blend:<inner>,<lambda>`.
    pub fn from_flag(flag: &str) -> Result<Self, NormError> {
        Self::new(NormSpec::from_flag(flag)?)
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    /// True for `p` in `(1, inf)` and for blends with positive weight.
    pub fn claims_strictly_convex(&self) -> bool {
        self.strictly_convex
    }

    /// True only for the exact Euclidean norm, whose isometry group contains all rotations.
    pub fn is_euclidean(&self) -> bool {
        matches!(self.kind, Kind::P(p) if p == 2.0)
    }

    #[inline]
    pub fn eval(&self, v: Vec2) -> f64 {
        match &self.kind {
            Kind::P(p) => p_norm(*p, v),
            Kind::Polygon { facets } => facets
                .iter()
                .map(|f| f.dot(v))
                .fold(0.0_f64, f64::max),
            Kind::Blend { base, lambda } => (1.0 - lambda) * base.eval(v) + lambda * v.euclid(),
        }
    }

    #[inline]
    pub fn dist(&self, a: Vec2, b: Vec2) -> f64 {
        self.eval(a - b)
    }

    /// A (sub)gradient of the norm at `v`; zero at the origin.
    pub fn gradient(&self, v: Vec2) -> Vec2 {
        if v == Vec2::ZERO {
            return Vec2::ZERO;
        }
        match &self.kind {
            Kind::P(p) => p_gradient(*p, v),
            Kind::Polygon { facets } => {
                let mut best = facets[0];
                let mut val = f64::NEG_INFINITY;
                for f in facets {
                    let d = f.dot(v);
                    if d > val {
                        val = d;
                        best = *f;
                    }
                }
                best
            }
            Kind::Blend { base, lambda } => {
                base.gradient(v) * (1.0 - lambda) + v * (lambda / v.euclid())
            }
        }
    }

    /// The point of the sphere of radius `r` around the origin in direction `theta`.
    #[inline]
    pub fn sphere_point(&self, r: f64, theta: f64) -> Vec2 {
        let u = Vec2::from_angle(theta);
        u * (r / self.eval(u))
    }

    /// Rescales `v` onto the unit sphere.
    pub fn normalize(&self, v: Vec2) -> Vec2 {
        v / self.eval(v)
    }

    /// Blend with the Euclidean norm: `v -> (1 - lambda) n(v) + lambda |v|`.
    pub fn strictify(&self, lambda: f64) -> Result<Norm2, NormError> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(NormError::BadStrictifyLambda(lambda));
        }
        Norm2::blend(self, lambda)
    }

    /// Short human-readable form in flag syntax.
    pub fn flag(&self) -> String {
        self.spec.to_flag()
    }
}

impl TryFrom<NormSpec> for Norm2 {
    type Error = NormError;
    fn try_from(spec: NormSpec) -> Result<Self, Self::Error> {
        Norm2::new(spec)
    }
}

impl From<Norm2> for NormSpec {
    fn from(n: Norm2) -> Self {
        n.spec
    }
}

#[inline]
fn p_norm(p: f64, v: Vec2) -> f64 {
    let (ax, ay) = (v.x.abs(), v.y.abs());
    if p == 2.0 {
        ax.hypot(ay)
    } else if p == 1.0 {
        ax + ay
    } else if p.is_infinite() {
        ax.max(ay)
    } else {
        let m = ax.max(ay);
        if m == 0.0 {
            return 0.0;
        }
        let (sx, sy) = (ax / m, ay / m);
        m * (sx.powf(p) + sy.powf(p)).powf(1.0 / p)
    }
}

fn p_gradient(p: f64, v: Vec2) -> Vec2 {
    if p == 2.0 {
        return v / v.euclid();
    }
    if p == 1.0 {
        return Vec2::new(sign(v.x), sign(v.y));
    }
    if p.is_infinite() {
        return if v.x.abs() >= v.y.abs() {
            Vec2::new(sign(v.x), 0.0)
        } else {
            Vec2::new(0.0, sign(v.y))
        };
    }
    let n = p_norm(p, v);
    let g = |c: f64| sign(c) * (c.abs() / n).powf(p - 1.0);
    Vec2::new(g(v.x), g(v.y))
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Facet functionals `f_i` with `f_i . v = 1` on edge `i` of the unit polygon,
/// so that `n(v) = max_i f_i . v`.
fn polygon_facets(vertices: &[Vec2]) -> Result<Vec<Vec2>, NormError> {
    if vertices.len() < 4 {
        return Err(NormError::TooFewVertices(vertices.len()));
    }
    let mut vs = vertices.to_vec();
    vs.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
    let scale = vs.iter().map(|v| v.euclid()).fold(0.0, f64::max);
    for v in &vs {
        if !v.is_finite() || v.euclid() == 0.0 {
            return Err(NormError::NotConvex(*v));
        }
        if !vs.iter().any(|w| (*w + *v).euclid() <= 1e-9 * scale) {
            return Err(NormError::NotSymmetric(*v));
        }
    }
    let k = vs.len();
    let mut facets = Vec::with_capacity(k);
    for i in 0..k {
        let (prev, cur, next) = (vs[(i + k - 1) % k], vs[i], vs[(i + 1) % k]);
        if (cur - prev).cross(next - cur) <= 1e-12 * scale * scale {
            return Err(NormError::NotConvex(cur));
        }
        let e = next - cur;
        let normal = Vec2::new(e.y, -e.x);
        let h = normal.dot(cur);
        if h <= 0.0 {
            return Err(NormError::NotConvex(cur));
        }
        facets.push(normal / h);
    }
    Ok(facets)
}
