use super::VerifyReport;
use crate::error::VerifyError;
use crate::norm::Norm2;
use crate::witness::WitnessSet;

fn consistent(report: &VerifyReport) -> impl Iterator<Item = &super::Placement> {
    report
        .placements
        .iter()
        .chain(&report.non_injective_found)
        .filter(move |p| p.max_edge_residual <= report.tol)
}

/// True when no consistent placement in `report` sends `x1` onto `x` or
/// `y1` onto `y`.
pub fn check_non_collapse(w: &WitnessSet, target: &Norm2, report: &VerifyReport) -> Result<bool, VerifyError> {
    let idx = |l: &str| w.index_of(l).ok_or(VerifyError::WrongShape);
    let (x, y, x1, y1) = (idx("x")?, idx("y")?, idx("x1")?, idx("y1")?);
    let tol = report.tol;
    Ok(consistent(report).all(|p| {
        p.images.len() == w.len()
            && target.dist(p.images[x], p.images[x1]) > tol
            && target.dist(p.images[y], p.images[y1]) > tol
    }))
}

/// True when every consistent injective placement keeps the anchor distance
/// within `eps + tol`.
pub fn approx_gap_check(w: &WitnessSet, target: &Norm2, report: &VerifyReport) -> Result<bool, VerifyError> {
    if !w.approximate {
        return Err(VerifyError::NotApproximate);
    }
    let bound = w.eps.unwrap_or(0.0) + report.tol;
    Ok(consistent(report).filter(|p| p.injective).all(|p| {
        let gap = target.dist(p.images[w.anchors.x], p.images[w.anchors.y]) - w.target_distance;
        gap.abs() <= bound
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::vec2::Vec2;
    use crate::verify::enumerate_placements;
    use crate::witness::{approx_set, base_pair, build_rational};

    #[test]
    fn figure1_set_collapses() {
        let e = Norm2::euclidean();
        let w = build_rational(Vec2::ZERO, Vec2::new(2.0, 0.0), Rational::integer(2), 1.0, &e).unwrap();
        let r = enumerate_placements(&w, &e, 720, 1e-6).unwrap();
        assert!(!check_non_collapse(&w, &e, &r).unwrap());
    }

    #[test]
    fn wrong_shape_and_flag() {
        let e = Norm2::euclidean();
        let w = base_pair(Vec2::ZERO, Vec2::new(1.0, 0.0), 1.0, &e).unwrap();
        let r = enumerate_placements(&w, &e, 4, 1e-6).unwrap();
        assert!(matches!(check_non_collapse(&w, &e, &r), Err(VerifyError::WrongShape)));
        assert!(matches!(approx_gap_check(&w, &e, &r), Err(VerifyError::NotApproximate)));
    }

    #[test]
    fn huge_eps_is_vacuous() {
        let e = Norm2::euclidean();
        let w = approx_set(Vec2::ZERO, Vec2::new(1.0, 1.0), 10.0, 1.0, &e).unwrap();
        let r = enumerate_placements(&w, &e, 4, 1e-6).unwrap();
        assert!(approx_gap_check(&w, &e, &r).unwrap());
    }
}
