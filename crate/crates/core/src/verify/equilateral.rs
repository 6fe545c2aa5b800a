use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::VerifyError;
use crate::lsq::{self, Problem, Term};
use crate::norm::Norm2;
use crate::sphere::{try_intersect, Side};
use crate::vec2::Vec2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilateralResult {
    /// Smallest `max_{i<j} |n(p_i - p_j) - d|` reached.
    pub best_residual: f64,
    pub best_points: Vec<Vec2>,
}

/// Candidates refined towards the minimax optimum after the least-squares pass.
const REFINE: usize = 8;

fn pair_terms(n: usize, d: f64) -> Vec<Term> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| Term::new(i, j, d)))
        .collect()
}

fn max_residual(norm: &Norm2, pts: &[Vec2], d: f64) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.max((norm.dist(pts[i], pts[j]) - d).abs());
        }
    }
    m
}

/// Seeds from sphere intersections: a triangle, then a parallelogram sweep
/// for the fourth point and intersections for the rest.
fn constructive(norm: &Norm2, d: f64, n: usize) -> Vec<Vec2> {
    let p0 = Vec2::ZERO;
    let p1 = norm.sphere_point(d, 0.0);
    let mut pts = vec![p0, p1];
    if n >= 3 {
        pts.push(try_intersect(norm, p0, d, p1, d, Side::Left).unwrap_or(Vec2::new(0.5 * d, d)));
    }
    if n >= 4 {
        let best = (0..720)
            .map(|k| {
                let q = norm.sphere_point(d, std::f64::consts::TAU * k as f64 / 720.0);
                let cand = [p0, p1, q, p1 + q];
                (max_residual(norm, &cand, d), q)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, q)| q)
            .unwrap_or(Vec2::ZERO);
        pts[2] = best;
        pts.push(p1 + best);
    }
    for k in 4..n {
        let side = if k % 2 == 0 { Side::Right } else { Side::Left };
        pts.push(try_intersect(norm, p0, d, p1, d, side).unwrap_or(Vec2::ZERO));
    }
    pts
}

/// Lawson-style reweighting: repeated weighted least squares whose weights
/// grow on the worst residuals, approaching the minimax solution.
fn minimax(norm: &Norm2, pts: &mut Vec<Vec2>, d: f64, fixed: &[bool]) -> f64 {
    let mut terms = pair_terms(pts.len(), d);
    let mut u = vec![1.0 / terms.len() as f64; terms.len()];
    let mut best = (max_residual(norm, pts, d), pts.clone());
    for _ in 0..40 {
        if best.0 <= 1e-12 {
            break;
        }
        let r: Vec<f64> = terms
            .iter()
            .map(|t| (norm.dist(pts[t.i], pts[t.j]) - d).abs())
            .collect();
        let total: f64 = u.iter().zip(&r).map(|(a, b)| a * b).sum();
        if !(total > 0.0) {
            break;
        }
        for ((ui, ri), t) in u.iter_mut().zip(&r).zip(terms.iter_mut()) {
            *ui = (*ui * ri / total).max(1e-12);
            t.weight = ui.sqrt();
        }
        Problem { norm, terms: &terms, fixed }.solve(pts, lsq::Options { max_iter: 30, target: 0.0 });
        let m = max_residual(norm, pts, d);
        if m < best.0 {
            best = (m, pts.clone());
        }
    }
    *pts = best.1;
    best.0
}

/// Looks for `n_points` points pairwise at distance `d`. Restart 0 is
/// constructive; the others start uniformly at random. Each restart is a
/// least-squares solve; the best few are then refined towards the minimax
/// optimum.
pub fn equilateral_search(
    norm: &Norm2,
    d: f64,
    n_points: usize,
    restarts: u64,
    seed: u64,
) -> Result<EquilateralResult, VerifyError> {
    if n_points < 3 {
        return Err(VerifyError::TooFewPoints(3));
    }
    let terms = pair_terms(n_points, d);
    let mut fixed = vec![false; n_points];
    fixed[0] = true;
    let opts = lsq::Options { max_iter: 100, target: 1e-13 };

    let run = |k: u64| -> (f64, Vec<Vec2>) {
        let mut pts = if k == 0 {
            constructive(norm, d, n_points)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
            let mut v: Vec<Vec2> = (0..n_points)
                .map(|_| Vec2::new(rng.gen_range(-1.5 * d..1.5 * d), rng.gen_range(-1.5 * d..1.5 * d)))
                .collect();
            v[0] = Vec2::ZERO;
            v
        };
        Problem { norm, terms: &terms, fixed: &fixed }.solve(&mut pts, opts);
        (max_residual(norm, &pts, d), pts)
    };

    let count = restarts.max(1);
    #[cfg(feature = "parallel")]
    let mut all: Vec<(f64, Vec<Vec2>)> = {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut all: Vec<(f64, Vec<Vec2>)> = (0..count).map(run).collect();

    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(REFINE);
    let mut best: Option<(f64, Vec<Vec2>)> = None;
    for (r0, mut pts) in all {
        let r = if r0 <= 1e-12 { r0 } else { minimax(norm, &mut pts, d, &fixed).min(r0) };
        let r = r.min(max_residual(norm, &pts, d));
        if best.as_ref().map_or(true, |b| r < b.0) {
            best = Some((r, pts));
        }
    }
    let (best_residual, best_points) = best.expect("at least one restart");
    Ok(EquilateralResult { best_residual, best_points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangles_exist_everywhere() {
        for n in [Norm2::euclidean(), Norm2::p(1.5).unwrap(), Norm2::chebyshev(), Norm2::taxicab()] {
            let r = equilateral_search(&n, 1.0, 3, 4, 1).unwrap();
            assert!(r.best_residual <= 1e-9, "{} {}", n.flag(), r.best_residual);
        }
    }

    #[test]
    fn chebyshev_square() {
        let r = equilateral_search(&Norm2::chebyshev(), 1.0, 4, 4, 1).unwrap();
        assert!(r.best_residual <= 1e-9, "{}", r.best_residual);
    }

    #[test]
    fn euclidean_four_points_impossible() {
        let r = equilateral_search(&Norm2::euclidean(), 1.0, 4, 200, 3).unwrap();
        assert!(r.best_residual >= 1e-2, "{}", r.best_residual);
    }

    #[test]
    fn too_few_points() {
        assert!(equilateral_search(&Norm2::euclidean(), 1.0, 2, 1, 0).is_err());
    }
}
