//! Randomized evidence for strict convexity and for the two-sided uniqueness
//! condition on equidistant points. Neither scan is a proof.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Norm2;
use crate::error::StarError;
use crate::tol;
use crate::vec2::Vec2;

/// Pairs of unit vectors whose directions differ by less than this angle
/// are treated as positively parallel.
const MIN_SEPARATION: f64 = 1e-2;

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub is_consistent: bool,
    /// Sampled pair with the smallest triangle-inequality defect.
    pub worst_pair: Option<(Vec2, Vec2)>,
    /// `n(a) + n(b) - n(a + b)` at `worst_pair`.
    pub min_defect: f64,
}

/// Samples unit-sphere pairs `a, b` that are not positively parallel and
/// reports whether any satisfies `n(a + b) >= n(a) + n(b) - tol`.
pub fn strict_convexity_scan(n: &Norm2, samples: usize, tol: f64, seed: u64) -> ConvexityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<(Vec2, Vec2)> = None;
    let mut min_defect = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let alpha = rng.gen_range(0.0..TAU);
        // Bias half the draws towards nearby directions, where flat pieces show up.
        let spread = if rng.gen_bool(0.5) { PI } else { 0.5 };
        let beta = alpha + rng.gen_range(-spread..spread);
        let sep = angular_separation(alpha, beta);
        if sep < MIN_SEPARATION {
            continue;
        }
        let a = n.sphere_point(1.0, alpha);
        let b = n.sphere_point(1.0, beta);
        let defect = n.eval(a) + n.eval(b) - n.eval(a + b);
        if defect < min_defect {
            min_defect = defect;
            worst = Some((a, b));
        }
    }
    ConvexityReport {
        is_consistent: !(min_defect <= tol),
        worst_pair: worst,
        min_defect,
    }
}

fn angular_separation(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn det(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    (b - a).cross(p - a)
}

/// Checks one quadruple against the uniqueness condition: if `c` and `d` are
/// on the same side of line `ab` and equidistant from both `a` and `b`
/// (within `tol`), then they must coincide.
///
/// Returns `Ok(true)` when the quadruple does not violate the condition.
pub fn check_star_condition(
    n: &Norm2,
    a: Vec2,
    b: Vec2,
    c: Vec2,
    d: Vec2,
    tol: f64,
) -> Result<bool, StarError> {
    let ab = (b - a).euclid();
    if ab == 0.0 {
        return Err(StarError::DegenerateLine);
    }
    let sc = det(a, b, c);
    let sd = det(a, b, d);
    if sc.abs() <= tol::COLLINEAR * ab * (c - a).euclid().max(1.0) {
        return Err(StarError::OnLine(c));
    }
    if sd.abs() <= tol::COLLINEAR * ab * (d - a).euclid().max(1.0) {
        return Err(StarError::OnLine(d));
    }
    if sc.signum() != sd.signum() {
        return Err(StarError::OppositeSides);
    }
    let hyp = (n.dist(a, c) - n.dist(a, d)).abs() <= tol && (n.dist(b, c) - n.dist(b, d)).abs() <= tol;
    Ok(!hyp || n.dist(c, d) <= tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub holds: bool,
    pub witness_quadruple: Option<[Vec2; 4]>,
    /// Largest `n(c - d)` among sampled quadruples meeting the hypothesis.
    pub max_violation: f64,
}

/// Randomized search for a violating quadruple. For each trial, `a`, `b`, `c`
/// are drawn at random and the sphere around `a` through `c` is swept on
/// `c`'s side of line `ab` looking for another point `d` at the same
/// distance from `b`.
pub fn star_scan(n: &Norm2, trials: usize, sweep: usize, tol: f64, seed: u64) -> StarReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<[Vec2; 4]> = None;
    let mut max_violation = 0.0_f64;
    let sweep = sweep.max(8);
    for _ in 0..trials {
        let a = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let c = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let side = det(a, b, c);
        if (b - a).euclid() < 1e-3 || side.abs() < 1e-3 {
            continue;
        }
        let r1 = n.dist(a, c);
        let r2 = n.dist(b, c);
        let base = (b - a).angle();
        for i in 1..sweep {
            let theta = base + PI * i as f64 / sweep as f64 * side.signum();
            let d = a + n.sphere_point(r1, theta);
            if (n.dist(b, d) - r2).abs() > tol || det(a, b, d).abs() < 1e-9 {
                continue;
            }
            let gap = n.dist(c, d);
            if gap > max_violation {
                max_violation = gap;
                best = Some([a, b, c, d]);
            }
        }
    }
    StarReport {
        holds: !(max_violation > tol.max(1e-6) * 10.0),
        witness_quadruple: best.filter(|_| max_violation > tol.max(1e-6) * 10.0),
        max_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_scan_consistent() {
        let r = strict_convexity_scan(&Norm2::euclidean(), 10_000, 1e-9, 1);
        assert!(r.is_consistent, "{r:?}");
    }

    #[test]
    fn chebyshev_and_taxicab_fail() {
        for n in [Norm2::chebyshev(), Norm2::taxicab()] {
            let r = strict_convexity_scan(&n, 10_000, 1e-9, 1);
            assert!(!r.is_consistent);
            let (a, b) = r.worst_pair.unwrap();
            assert!((n.eval(a + b) - n.eval(a) - n.eval(b)).abs() <= 1e-9);
        }
    }

    #[test]
    fn explicit_flat_pairs() {
        let inf = Norm2::chebyshev();
        let a = inf.normalize(Vec2::new(1.0, 0.2));
        let b = inf.normalize(Vec2::new(1.0, -0.2));
        assert!((inf.eval(a + b) - inf.eval(a) - inf.eval(b)).abs() < 1e-15);
        let one = Norm2::taxicab();
        let (a, b) = (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
        assert_eq!(one.eval(a + b), one.eval(a) + one.eval(b));
    }

    #[test]
    fn chebyshev_quadruple_violates() {
        let n = Norm2::chebyshev();
        let ok = check_star_condition(
            &n,
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 3.0),
            Vec2::new(1.5, 3.0),
            1e-9,
        )
        .unwrap();
        assert!(!ok);
    }

    #[test]
    fn coincident_pair_passes() {
        for n in [Norm2::euclidean(), Norm2::chebyshev(), Norm2::taxicab()] {
            let c = Vec2::new(1.0, 1.0);
            assert!(check_star_condition(&n, Vec2::ZERO, Vec2::new(2.0, 0.0), c, c, 1e-9).unwrap());
        }
    }

    #[test]
    fn precondition_errors_are_distinct() {
        let n = Norm2::euclidean();
        let (a, b) = (Vec2::ZERO, Vec2::new(1.0, 0.0));
        assert_eq!(
            check_star_condition(&n, a, a, Vec2::new(0.0, 1.0), Vec2::new(0.0, 1.0), 1e-9),
            Err(StarError::DegenerateLine)
        );
        assert!(matches!(
            check_star_condition(&n, a, b, Vec2::new(3.0, 0.0), Vec2::new(0.0, 1.0), 1e-9),
            Err(StarError::OnLine(_))
        ));
        assert_eq!(
            check_star_condition(&n, a, b, Vec2::new(0.5, 1.0), Vec2::new(0.5, -1.0), 1e-9),
            Err(StarError::OppositeSides)
        );
    }

    #[test]
    fn star_scan_separates_norms() {
        assert!(star_scan(&Norm2::euclidean(), 300, 1024, 1e-9, 3).holds);
        assert!(star_scan(&Norm2::p(1.5).unwrap(), 300, 1024, 1e-9, 3).holds);
        let r = star_scan(&Norm2::chebyshev(), 300, 1024, 1e-9, 3);
        assert!(!r.holds);
        let [a, b, c, d] = r.witness_quadruple.unwrap();
        assert!(!check_star_condition(&Norm2::chebyshev(), a, b, c, d, 1e-9).unwrap());
    }
}
