//! Levenberg-Marquardt for systems of norm-distance constraints.
//!
//! The Jacobian is never formed: each residual touches two points, so the
//! damped normal equations are solved matrix-free by conjugate gradients.

use crate::norm::Norm2;
use crate::vec2::Vec2;

/// One residual `weight * (n(p[i] - p[j]) - len)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub i: usize,
    pub j: usize,
    pub len: f64,
    pub weight: f64,
}

impl Term {
    pub fn new(i: usize, j: usize, len: f64) -> Self {
        Self { i, j, len, weight: 1.0 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub max_iter: usize,
    /// Stop as soon as every unweighted residual is at most this.
    pub target: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self { max_iter: 200, target: 1e-13 }
    }
}

pub struct Problem<'a> {
    pub norm: &'a Norm2,
    pub terms: &'a [Term],
    /// Points that must not move.
    pub fixed: &'a [bool],
}

impl Problem<'_> {
    fn residuals(&self, p: &[Vec2], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.terms
                .iter()
                .map(|t| t.weight * (self.norm.dist(p[t.i], p[t.j]) - t.len)),
        );
    }

    /// Largest unweighted residual.
    pub fn max_residual(&self, p: &[Vec2]) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.weight != 0.0)
            .map(|t| (self.norm.dist(p[t.i], p[t.j]) - t.len).abs())
            .fold(0.0, f64::max)
    }

    fn cost(&self, p: &[Vec2]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let r = t.weight * (self.norm.dist(p[t.i], p[t.j]) - t.len);
                r * r
            })
            .sum()
    }

    /// Runs LM in place. Returns the final maximum unweighted residual.
    pub fn solve(&self, p: &mut [Vec2], opts: Options) -> f64 {
        let np = p.len();
        let mut grads = vec![Vec2::ZERO; self.terms.len()];
        let mut r = Vec::with_capacity(self.terms.len());
        let mut mu = 1e-3;
        let mut cost = self.cost(p);
        let mut trial = p.to_vec();
        for _ in 0..opts.max_iter {
            if self.max_residual(p) <= opts.target {
                break;
            }
            self.residuals(p, &mut r);
            for (g, t) in grads.iter_mut().zip(self.terms) {
                *g = self.norm.gradient(p[t.i] - p[t.j]) * t.weight;
            }
            // rhs = -J^T r
            let mut rhs = vec![Vec2::ZERO; np];
            for ((t, g), ri) in self.terms.iter().zip(&grads).zip(&r) {
                rhs[t.i] -= *g * *ri;
                rhs[t.j] += *g * *ri;
            }
            self.mask(&mut rhs);
            let mut improved = false;
            for _ in 0..12 {
                let step = self.cg(&grads, &rhs, mu, 4 * np + 10);
                for k in 0..np {
                    trial[k] = p[k] + step[k];
                }
                let c = self.cost(&trial);
                if c.is_finite() && c < cost {
                    p.copy_from_slice(&trial);
                    cost = c;
                    mu = (mu * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !improved {
                break;
            }
        }
        self.max_residual(p)
    }

    fn mask(&self, v: &mut [Vec2]) {
        for (x, &f) in v.iter_mut().zip(self.fixed) {
            if f {
                *x = Vec2::ZERO;
            }
        }
    }

    /// `(J^T J + mu I) v`
    fn apply(&self, grads: &[Vec2], v: &[Vec2], mu: f64, out: &mut [Vec2]) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = *x * mu;
        }
        for (t, g) in self.terms.iter().zip(grads) {
            let jv = g.dot(v[t.i] - v[t.j]);
            out[t.i] += *g * jv;
            out[t.j] -= *g * jv;
        }
        self.mask(out);
    }

    fn cg(&self, grads: &[Vec2], b: &[Vec2], mu: f64, iters: usize) -> Vec<Vec2> {
        let n = b.len();
        let dot = |a: &[Vec2], b: &[Vec2]| a.iter().zip(b).map(|(x, y)| x.dot(*y)).sum::<f64>();
        let mut x = vec![Vec2::ZERO; n];
        let mut r = b.to_vec();
        let mut d = r.clone();
        let mut ad = vec![Vec2::ZERO; n];
        let mut rr = dot(&r, &r);
        let stop = rr * 1e-28;
        for _ in 0..iters {
            if rr <= stop || rr == 0.0 {
                break;
            }
            self.apply(grads, &d, mu, &mut ad);
            let dad = dot(&d, &ad);
            if dad <= 0.0 {
                break;
            }
            let alpha = rr / dad;
            for k in 0..n {
                x[k] += d[k] * alpha;
                r[k] -= ad[k] * alpha;
            }
            let rr_new = dot(&r, &r);
            let beta = rr_new / rr;
            rr = rr_new;
            for k in 0..n {
                d[k] = r[k] + d[k] * beta;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polishes_perturbed_triangle() {
        let n = Norm2::p(1.5).unwrap();
        let mut p = vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.45, 0.7)];
        let terms = [Term::new(0, 1, 1.0), Term::new(0, 2, 1.0), Term::new(1, 2, 1.0)];
        let fixed = [true, true, false];
        let prob = Problem { norm: &n, terms: &terms, fixed: &fixed };
        let res = prob.solve(&mut p, Options::default());
        assert!(res <= 1e-12, "{res}");
        assert_eq!(p[0], Vec2::ZERO);
        assert_eq!(p[1], Vec2::new(1.0, 0.0));
    }

    #[test]
    fn handles_chebyshev() {
        let n = Norm2::chebyshev();
        let mut p = vec![Vec2::ZERO, Vec2::new(0.9, 0.1), Vec2::new(0.2, 1.2), Vec2::new(1.1, 0.8)];
        let mut terms = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                terms.push(Term::new(i, j, 1.0));
            }
        }
        let fixed = [true, false, false, false];
        let prob = Problem { norm: &n, terms: &terms, fixed: &fixed };
        let res = prob.solve(&mut p, Options::default());
        assert!(res <= 1e-12, "{res} {p:?}");
    }
}
