//! Recursive constructions for rational distance ratios.
//!
//! A segment of ratio `m/n` (distance `m/n * rho`) is built by:
//! - `0`: a single point; `1`: a `rho`-edge,
//! - `m = 2`: doubling a segment of ratio `1/n`,
//! - `m >= 3`: a chain of `m` steps of ratio `1/n` (needs `1/n` and `2/n`),
//! - `m = 1, n >= 2`: dividing `rho` by `n` (needs `1`, `n - 1` and `n`).

use std::collections::{BTreeSet, HashSet};

use super::store::PointStore;
use super::{Anchors, Point, Rule, TraceNode, WitnessSet};
use crate::error::BuildError;
use crate::norm::Norm2;
use crate::rational::Rational;
use crate::sphere::{sphere_intersect, Side};
use crate::tol;
use crate::vec2::Vec2;

const DEPTH_CAP: usize = 64;

pub(crate) struct Builder<'a> {
    pub norm: &'a Norm2,
    pub rho: f64,
    pub store: PointStore,
    pub edges: BTreeSet<[usize; 2]>,
    memo: HashSet<(usize, usize, Rational)>,
    nodes: usize,
}

impl<'a> Builder<'a> {
    pub fn new(norm: &'a Norm2, rho: f64) -> Result<Self, BuildError> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(BuildError::BadRho(rho));
        }
        Ok(Self {
            norm,
            rho,
            store: PointStore::default(),
            edges: BTreeSet::new(),
            memo: HashSet::new(),
            nodes: 0,
        })
    }

    pub fn add_point(&mut self, p: Vec2, label: &str) -> usize {
        self.store.insert(p, || label.to_string())
    }

    fn add_named(&mut self, p: Vec2, name: &str, depth: usize) -> usize {
        let id = self.nodes;
        self.store.insert(p, || {
            if depth == 0 {
                name.to_string()
            } else {
                format!("{name}#{id}")
            }
        })
    }

    fn pos(&self, k: usize) -> Vec2 {
        self.store.points[k]
    }

    fn sphere(
        &self,
        rule: &'static str,
        a: Vec2,
        r1: f64,
        b: Vec2,
        r2: f64,
    ) -> Result<Vec2, BuildError> {
        sphere_intersect(self.norm, a, r1, b, r2, Side::Left, tol::CONSTRUCTION)
            .map(|i| i.point)
            .map_err(|source| BuildError::Sphere { rule, source })
    }

    /// Builds the witness set for segment `a -> b` of the given ratio.
    pub fn segment(&mut self, a: usize, b: usize, ratio: Rational, depth: usize) -> Result<TraceNode, BuildError> {
        if depth > DEPTH_CAP {
            return Err(BuildError::DepthExceeded(DEPTH_CAP));
        }
        self.nodes += 1;
        if ratio == Rational::ZERO {
            return Ok(TraceNode::leaf(Rule::Point, [a, b], Some(ratio)));
        }
        if ratio == Rational::ONE {
            self.edges.insert([a.min(b), a.max(b)]);
            return Ok(TraceNode::leaf(Rule::Base, [a, b], Some(ratio)));
        }
        if !self.memo.insert((a, b, ratio)) {
            return Ok(TraceNode::leaf(Rule::Memo, [a, b], Some(ratio)));
        }
        let (m, n) = (ratio.num(), ratio.den());
        let unit = Rational::new(1, n).expect("n > 0");
        match (m, n) {
            (2, _) => self.double(a, b, unit, depth),
            (m, _) if m >= 3 => self.multiply(a, b, m, unit, depth),
            (1, n) => self.divide(a, b, n, Rational::ONE, depth),
            _ => unreachable!("ratio {ratio} is 0 or 1"),
        }
    }

    pub fn double(&mut self, x: usize, y: usize, half: Rational, depth: usize) -> Result<TraceNode, BuildError> {
        let d = half.to_f64() * self.rho;
        let (px, py) = (self.pos(x), self.pos(y));
        let pz = px.lerp(py, 0.5);
        let py1 = self.sphere("fig1", px, d, pz, d)?;
        let px1 = py1 + (pz - px);
        let z = self.add_named(pz, "z", depth);
        let y1 = self.add_named(py1, "y1", depth);
        let x1 = self.add_named(px1, "x1", depth);
        let pairs = [(x, z), (z, y), (y1, x1), (x, y1), (z, x1), (z, y1), (y, x1)];
        let mut node = TraceNode::leaf(Rule::Fig1, [x, y], Some(half.mul_int(2)));
        for (a, b) in pairs {
            node.children.push(self.segment(a, b, half, depth + 1)?);
        }
        Ok(node)
    }

    pub fn multiply(&mut self, x: usize, y: usize, k: u64, step: Rational, depth: usize) -> Result<TraceNode, BuildError> {
        if k == 0 {
            return Err(BuildError::BadMultiplier);
        }
        let (px, py) = (self.pos(x), self.pos(y));
        let mut chain = Vec::with_capacity(k as usize + 1);
        chain.push(x);
        for i in 1..k {
            let p = px.lerp(py, i as f64 / k as f64);
            chain.push(self.add_named(p, &format!("w{i}"), depth));
        }
        chain.push(y);
        let mut node = TraceNode::leaf(Rule::Fig2, [x, y], Some(step.mul_int(k)));
        let double = step.mul_int(2);
        for i in 0..k as usize {
            node.children.push(self.segment(chain[i], chain[i + 1], step, depth + 1)?);
            if i + 2 <= k as usize {
                node.children.push(self.segment(chain[i], chain[i + 2], double, depth + 1)?);
            }
        }
        Ok(node)
    }

    pub fn divide(&mut self, x: usize, y: usize, k: u64, d_ratio: Rational, depth: usize) -> Result<TraceNode, BuildError> {
        if k == 0 {
            return Err(BuildError::BadMultiplier);
        }
        let d = d_ratio.to_f64() * self.rho;
        let (px, py) = (self.pos(x), self.pos(y));
        let pz = self.sphere("fig3", px, d, py, d)?;
        let km1 = (k - 1) as f64;
        let pxt = px + (px - pz) * km1;
        let pyt = py + (py - pz) * km1;
        let z = self.add_named(pz, "z", depth);
        let xt = self.add_named(pxt, "x~", depth);
        let yt = self.add_named(pyt, "y~", depth);
        let (r1, rk1, rk) = (d_ratio, d_ratio.mul_int(k - 1), d_ratio.mul_int(k));
        let pairs = [
            (xt, yt, r1),
            (xt, x, rk1),
            (x, z, r1),
            (xt, z, rk),
            (yt, y, rk1),
            (y, z, r1),
            (yt, z, rk),
        ];
        let mut node = TraceNode::leaf(Rule::Fig3, [x, y], Some(d_ratio.div_int(k)));
        for (a, b, r) in pairs {
            node.children.push(self.segment(a, b, r, depth + 1)?);
        }
        Ok(node)
    }

    pub fn finish(self, x: usize, y: usize, target: f64, trace: TraceNode) -> WitnessSet {
        let points = self
            .store
            .points
            .iter()
            .zip(self.store.labels)
            .enumerate()
            .map(|(id, (&xy, label))| Point { id, label, xy })
            .collect();
        WitnessSet {
            rho: self.rho,
            source_norm: self.norm.clone(),
            points,
            edges: self.edges.into_iter().collect(),
            anchors: Anchors { x, y },
            target_distance: target,
            approximate: false,
            eps: None,
            trace,
            config_graph: None,
        }
    }
}

fn check_distance(norm: &Norm2, x: Vec2, y: Vec2, expected: f64) -> Result<(), BuildError> {
    let actual = norm.dist(x, y);
    if (actual - expected).abs() <= tol::CONSTRUCTION * expected.max(1.0) {
        Ok(())
    } else {
        Err(BuildError::DistanceMismatch { expected, actual })
    }
}

fn anchored(b: &mut Builder, x: Vec2, y: Vec2) -> (usize, usize) {
    let xi = b.add_point(x, "x");
    let yi = b.add_point(y, "y");
    (xi, yi)
}

/// `{x, y}` with one edge when `n(x - y) = rho`, or `{x}` when `x = y`.
pub fn base_pair(x: Vec2, y: Vec2, rho: f64, norm: &Norm2) -> Result<WitnessSet, BuildError> {
    let dist = norm.dist(x, y);
    let ratio = if dist <= tol::CONSTRUCTION {
        Rational::ZERO
    } else if (dist - rho).abs() <= tol::CONSTRUCTION * rho.max(1.0) {
        Rational::ONE
    } else {
        return Err(BuildError::DistanceMismatch { expected: rho, actual: dist });
    };
    build_rational(x, y, ratio, rho, norm)
}

/// Witness set for `n(x - y) = q * rho`.
pub fn build_rational(x: Vec2, y: Vec2, q: Rational, rho: f64, norm: &Norm2) -> Result<WitnessSet, BuildError> {
    let mut b = Builder::new(norm, rho)?;
    let target = q.to_f64() * rho;
    check_distance(norm, x, y, target)?;
    let (xi, yi) = anchored(&mut b, x, y);
    if q == Rational::ZERO && xi != yi {
        return Err(BuildError::DistanceMismatch { expected: 0.0, actual: norm.dist(x, y) });
    }
    let trace = b.segment(xi, yi, q, 0)?;
    Ok(b.finish(xi, yi, target, trace))
}

/// Doubling step: `n(x - y) = 2 * half * rho`.
pub fn double_set(x: Vec2, y: Vec2, half: Rational, rho: f64, norm: &Norm2) -> Result<WitnessSet, BuildError> {
    let mut b = Builder::new(norm, rho)?;
    let target = 2.0 * half.to_f64() * rho;
    check_distance(norm, x, y, target)?;
    let (xi, yi) = anchored(&mut b, x, y);
    let trace = b.double(xi, yi, half, 0)?;
    Ok(b.finish(xi, yi, target, trace))
}

/// Chain step: `n(x - y) = k * step * rho`.
pub fn multiply_set(x: Vec2, y: Vec2, k: u64, step: Rational, rho: f64, norm: &Norm2) -> Result<WitnessSet, BuildError> {
    if k == 0 {
        return Err(BuildError::BadMultiplier);
    }
    let mut b = Builder::new(norm, rho)?;
    let target = k as f64 * step.to_f64() * rho;
    check_distance(norm, x, y, target)?;
    let (xi, yi) = anchored(&mut b, x, y);
    let trace = if k == 1 { b.segment(xi, yi, step, 0)? } else { b.multiply(xi, yi, k, step, 0)? };
    Ok(b.finish(xi, yi, target, trace))
}

/// Division step: `n(x - y) = d * rho / k`.
pub fn divide_set(x: Vec2, y: Vec2, k: u64, d: Rational, rho: f64, norm: &Norm2) -> Result<WitnessSet, BuildError> {
    if k == 0 {
        return Err(BuildError::BadMultiplier);
    }
    let mut b = Builder::new(norm, rho)?;
    let target = d.to_f64() * rho / k as f64;
    check_distance(norm, x, y, target)?;
    let (xi, yi) = anchored(&mut b, x, y);
    let trace = if k == 1 { b.segment(xi, yi, d, 0)? } else { b.divide(xi, yi, k, d, 0)? };
    Ok(b.finish(xi, yi, target, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: f64 = 0.866_025_403_784_438_6;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn has_point(w: &WitnessSet, p: Vec2) -> bool {
        w.points.iter().any(|q| (q.xy - p).euclid() < 1e-9)
    }

    #[test]
    fn base_cases() {
        let e = Norm2::euclidean();
        let w = base_pair(Vec2::ZERO, Vec2::new(1.0, 0.0), 1.0, &e).unwrap();
        assert_eq!((w.len(), w.edges.len(), w.target_distance), (2, 1, 1.0));
        let p = Vec2::new(3.0, 4.0);
        let w = base_pair(p, p, 1.0, &e).unwrap();
        assert_eq!((w.len(), w.edges.len(), w.target_distance), (1, 0, 0.0));
        assert_eq!(w.anchors.x, w.anchors.y);
        w.validate(1e-9).unwrap();
        assert!(matches!(
            base_pair(Vec2::ZERO, Vec2::new(0.5, 0.0), 1.0, &e),
            Err(BuildError::DistanceMismatch { .. })
        ));
    }

    #[test]
    fn doubling_euclid() {
        let e = Norm2::euclidean();
        let w = double_set(Vec2::ZERO, Vec2::new(2.0, 0.0), Rational::ONE, 1.0, &e).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.edges.len(), 7);
        for p in [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.5, S3), (1.5, S3)] {
            assert!(has_point(&w, Vec2::new(p.0, p.1)), "{p:?}");
        }
        assert_eq!(w.anchor_points(), (Vec2::ZERO, Vec2::new(2.0, 0.0)));
        assert_eq!(w.target_distance, 2.0);
        w.validate(1e-9).unwrap();
        let labels: Vec<&str> = w.points.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["x", "y", "z", "y1", "x1"]);
    }

    #[test]
    fn doubling_p15() {
        let n = Norm2::p(1.5).unwrap();
        let w = double_set(Vec2::ZERO, Vec2::new(2.0, 0.0), Rational::ONE, 1.0, &n).unwrap();
        assert_eq!((w.len(), w.edges.len()), (5, 7));
        assert!(w.max_edge_residual() <= 1e-9);
        w.validate(1e-9).unwrap();
    }

    #[test]
    fn multiply_chain() {
        let e = Norm2::euclidean();
        let w = multiply_set(Vec2::ZERO, Vec2::new(3.0, 0.0), 3, Rational::ONE, 1.0, &e).unwrap();
        for i in 0..4 {
            assert!(has_point(&w, Vec2::new(i as f64, 0.0)));
        }
        let node = &w.trace;
        assert_eq!(node.rule, Rule::Fig2);
        let ones = node.children.iter().filter(|c| c.ratio == Some(Rational::ONE)).count();
        let twos = node.children.iter().filter(|c| c.ratio == Some(Rational::integer(2))).count();
        assert_eq!((ones, twos), (3, 2));
        // Chain (0..3) plus apexes of the doublings over [0,2] and [1,3]; (1.5, s3) is shared.
        assert_eq!(w.len(), 7);
        w.validate(1e-9).unwrap();
        let k1 = multiply_set(Vec2::ZERO, Vec2::new(1.0, 0.0), 1, Rational::ONE, 1.0, &e).unwrap();
        assert_eq!((k1.len(), k1.edges.len()), (2, 1));
        let k2 = multiply_set(Vec2::ZERO, Vec2::new(2.0, 0.0), 2, Rational::ONE, 1.0, &e).unwrap();
        assert_eq!(k2.len(), 5);
    }

    #[test]
    fn divide_euclid() {
        let e = Norm2::euclidean();
        let w = divide_set(Vec2::ZERO, Vec2::new(0.5, 0.0), 2, Rational::ONE, 1.0, &e).unwrap();
        let h = 15f64.sqrt() / 4.0;
        assert!((h - 0.968_245_8).abs() < 1e-7);
        let z = Vec2::new(0.25, h);
        let xt = Vec2::new(-0.25, -h);
        let yt = Vec2::new(0.75, -h);
        for p in [z, xt, yt] {
            assert!(has_point(&w, p));
        }
        assert!((e.dist(xt, yt) - 1.0).abs() < 1e-12);
        assert_eq!(w.len(), 9);
        w.validate(1e-9).unwrap();
        let k1 = divide_set(Vec2::ZERO, Vec2::new(1.0, 0.0), 1, Rational::ONE, 1.0, &e).unwrap();
        assert_eq!((k1.len(), k1.edges.len()), (2, 1));
    }

    #[test]
    fn divide_p3_k3() {
        let n = Norm2::p(3.0).unwrap();
        let y = Vec2::new(1.0 / 3.0, 0.0);
        let w = divide_set(Vec2::ZERO, y, 3, Rational::ONE, 1.0, &n).unwrap();
        w.validate(1e-9).unwrap();
        let kids: Vec<_> = w.trace.children.iter().map(|c| c.ratio.unwrap().to_string()).collect();
        assert_eq!(kids, ["1/1", "2/1", "1/1", "3/1", "2/1", "1/1", "3/1"]);
        for c in &w.trace.children {
            let [i, j] = c.ends;
            let got = n.dist(w.points[i].xy, w.points[j].xy);
            assert!((got - c.ratio.unwrap().to_f64()).abs() <= 1e-9);
        }
    }

    #[test]
    fn rational_sizes() {
        let e = Norm2::euclidean();
        let sizes: Vec<(usize, usize)> = ["1", "2", "1/2"]
            .iter()
            .map(|q| {
                let q = r(q);
                let w = build_rational(Vec2::ZERO, Vec2::new(q.to_f64(), 0.0), q, 1.0, &e).unwrap();
                (w.len(), w.edges.len())
            })
            .collect();
        assert_eq!(sizes[0], (2, 1));
        assert_eq!(sizes[1], (5, 7));
        assert_eq!(sizes[2].0, 9);
    }

    #[test]
    fn rejects_wrong_distance() {
        let e = Norm2::euclidean();
        assert!(build_rational(Vec2::ZERO, Vec2::new(1.0, 0.0), r("2"), 1.0, &e).is_err());
        assert!(build_rational(Vec2::ZERO, Vec2::new(1.0, 0.0), r("1"), -1.0, &e).is_err());
    }

    #[test]
    fn memo_reuses_segments() {
        let e = Norm2::euclidean();
        let q = r("5/4");
        let w = build_rational(Vec2::ZERO, Vec2::new(1.25, 0.0), q, 1.0, &e).unwrap();
        assert!(w.trace.count(Rule::Memo) > 0);
        w.validate(1e-9).unwrap();
    }
}
