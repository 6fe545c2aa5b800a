use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::enumerate::violation_threshold;
use super::{Mode, Placement, VerifyReport};
use crate::lsq::{self, Problem, Term};
use crate::norm::Norm2;
use crate::vec2::Vec2;
use crate::witness::WitnessSet;

#[derive(Clone, Debug)]
pub struct FalsifyOptions {
    pub restarts: u64,
    pub seed: u64,
    pub tol: f64,
    pub require_injective: bool,
    /// Weight of the term pulling the anchor distance off its value.
    pub reward_weight: f64,
    pub store_cap: usize,
}

impl Default for FalsifyOptions {
    fn default() -> Self {
        Self {
            restarts: 1000,
            seed: 0,
            tol: crate::tol::VERIFY,
            require_injective: true,
            reward_weight: 0.3,
            store_cap: 1 << 12,
        }
    }
}

pub fn falsify(
    w: &WitnessSet,
    target: &Norm2,
    restarts: u64,
    seed: u64,
    tol: f64,
    require_injective: bool,
) -> VerifyReport {
    let opts = FalsifyOptions { restarts, seed, tol, require_injective, ..Default::default() };
    falsify_with(w, target, &opts)
}

/// Random restarts of penalty minimization. Each restart first pulls the
/// anchor distance towards a random wrong value, then drops that pull and
/// polishes the edges alone. Restart `k` uses the stream seeded by
/// `seed + k`, so the report does not depend on scheduling.
pub fn falsify_with(w: &WitnessSet, target: &Norm2, opts: &FalsifyOptions) -> VerifyReport {
    let mut report = VerifyReport::new(Mode::Falsify, opts.tol, violation_threshold(w, 10.0 * opts.tol));
    if w.len() < 2 || opts.restarts == 0 {
        return report;
    }
    let origin = w.points[w.anchors.x].xy;
    let extent = w
        .points
        .iter()
        .map(|p| (p.xy - origin).euclid())
        .fold(w.rho, f64::max);
    let edges: Vec<Term> = w.edges.iter().map(|&[i, j]| Term::new(i, j, w.rho)).collect();
    let mut fixed = vec![false; w.len()];
    fixed[w.anchors.x] = true;

    let run = |k: u64| -> Option<Placement> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k));
        let mut imgs: Vec<Vec2> = (0..w.len())
            .map(|_| Vec2::new(rng.gen_range(-extent..=extent), rng.gen_range(-extent..=extent)))
            .collect();
        imgs[w.anchors.x] = Vec2::ZERO;
        let shift: f64 = rng.gen_range(0.1..0.9);
        let scale = if rng.gen_bool(0.5) { 1.0 - shift } else { 1.0 + shift };
        let mut terms = edges.clone();
        terms.push(Term {
            i: w.anchors.x,
            j: w.anchors.y,
            len: w.target_distance * scale,
            weight: opts.reward_weight,
        });
        let pull = lsq::Options { max_iter: 100, target: 0.0 };
        Problem { norm: target, terms: &terms, fixed: &fixed }.solve(&mut imgs, pull);
        let polish = lsq::Options { max_iter: 400, target: 1e-13 };
        Problem { norm: target, terms: &edges, fixed: &fixed }.solve(&mut imgs, polish);
        let p = Placement::evaluate(w, target, imgs);
        (p.max_edge_residual <= opts.tol).then_some(p)
    };

    #[cfg(feature = "parallel")]
    let found: Vec<Option<Placement>> = {
        use rayon::prelude::*;
        (0..opts.restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Option<Placement>> = (0..opts.restarts).map(run).collect();

    report.search_budget_used = opts.restarts;
    for p in found.into_iter().flatten() {
        report.record(p, opts.require_injective, opts.store_cap);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::witness::build_rational;

    fn q2() -> WitnessSet {
        build_rational(Vec2::ZERO, Vec2::new(2.0, 0.0), Rational::integer(2), 1.0, &Norm2::euclidean()).unwrap()
    }

    #[test]
    fn chebyshev_target_flexes() {
        let r = falsify(&q2(), &Norm2::chebyshev(), 200, 7, 1e-6, true);
        assert!(r.violations.iter().any(|p| p.injective && p.anchor_gap.abs() > 1e-2));
    }

    #[test]
    fn euclidean_target_holds() {
        let r = falsify(&q2(), &Norm2::euclidean(), 200, 7, 1e-6, true);
        assert!(r.violations.is_empty(), "{:?}", r.violations.first());
        assert!(r.injective_found > 0);
    }

    #[test]
    fn same_seed_same_report() {
        let a = falsify(&q2(), &Norm2::p(3.0).unwrap(), 50, 11, 1e-6, true);
        let b = falsify(&q2(), &Norm2::p(3.0).unwrap(), 50, 11, 1e-6, true);
        assert_eq!(a, b);
    }
}
