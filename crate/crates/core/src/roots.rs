//! Bracketed scalar root finding.

/// Iteration cap for every bracketed solve in the crate.
pub const MAX_ITER: usize = 200;

/// Finds a root of `f` in `[lo, hi]` given `f(lo)` and `f(hi)` of opposite
/// sign (or one of them zero).
///
/// Runs the Illinois variant of regula falsi, forcing a plain bisection step
/// whenever the bracket fails to halve, so the bracket always shrinks at
/// least geometrically. Returns the abscissa with the smallest `|f|` seen.
pub fn bracketed<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64) -> f64 {
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(flo.signum() != fhi.signum(), "root not bracketed: f({lo}) = {flo}, f({hi}) = {fhi}");
    let (mut best, mut fbest) = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
    let mut side = 0i8;
    let mut width = (hi - lo).abs();
    for it in 0..MAX_ITER {
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        let force_bisect = it % 3 == 2 && (hi - lo).abs() > 0.5 * width;
        if force_bisect || !x.is_finite() || x <= lo.min(hi) || x >= lo.max(hi) {
            x = 0.5 * (lo + hi);
        }
        if it % 3 == 2 {
            width = (hi - lo).abs();
        }
        let fx = f(x);
        if fx.abs() < fbest.abs() {
            best = x;
            fbest = fx;
        }
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == fhi.signum() {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        }
        let scale = lo.abs().max(hi.abs()).max(1.0);
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * scale {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let r = bracketed(|x| x * x - 2.0, 0.0, 2.0, -2.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn handles_flat_and_kinked_functions() {
        let r = bracketed(|x: f64| (x - 0.3).powi(5), -1.0, 1.0, (-1.3f64).powi(5), 0.7f64.powi(5));
        assert!((r - 0.3).abs() < 1e-3);
        let r = bracketed(|x: f64| (x - 0.25).abs().max(0.0) * (x - 0.25).signum(), 0.0, 1.0, -0.25, 0.75);
        assert!((r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn reversed_bracket() {
        let r = bracketed(|x| 1.0 - x, 0.0, 3.0, 1.0, -2.0);
        assert!((r - 1.0).abs() < 1e-15);
    }
}
