//! The eleven-point, nineteen-edge configuration that rules out collapsing
//! maps: two equilateral lattices over `x, z, y` plus two translated
//! rhombus pairs hanging off `x1` and `y1`.

use serde::{Deserialize, Serialize};

use super::{Anchors, Point, Rule, TraceNode, WitnessSet};
use crate::error::BuildError;
use crate::lsq::{Options, Problem, Term};
use crate::norm::Norm2;
use crate::rational::Rational;
use crate::sphere::{find_second_pair, sphere_intersect, OrientedFrame, Side};
use crate::tol;
use crate::vec2::Vec2;

pub const LABELS: [&str; 11] = ["x", "y", "z", "x~", "x1", "x~1", "y~", "y1", "y~1", "zx", "zy"];

const ADJACENCY: [[u8; 11]; 11] = [
    [0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0],
    [1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0],
];

/// Vertex names and 0/1 adjacency of an abstract configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigGraph {
    pub vertex_labels: Vec<String>,
    pub adjacency: Vec<Vec<u8>>,
}

impl ConfigGraph {
    /// Rows in the order x, y, (x+y)/2, x~, x1, x~1, y~, y1, y~1, z_x, z_y.
    pub fn figure5() -> Self {
        Self {
            vertex_labels: LABELS.iter().map(|s| s.to_string()).collect(),
            adjacency: ADJACENCY.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for (j, &a) in row.iter().enumerate().skip(i + 1) {
                if a == 1 {
                    out.push([i, j]);
                }
            }
        }
        out
    }

    pub fn is_well_formed(&self) -> bool {
        let n = self.vertex_labels.len();
        self.adjacency.len() == n
            && self.adjacency.iter().all(|r| r.len() == n)
            && (0..n).all(|i| self.adjacency[i][i] == 0)
            && (0..n).all(|i| (0..n).all(|j| self.adjacency[i][j] == self.adjacency[j][i]))
            && self.adjacency.iter().flatten().all(|&a| a <= 1)
    }
}

#[derive(Clone, Debug)]
pub struct Figure5Options {
    /// Strictification weights tried, in order, for norms that are not
    /// strictly convex.
    pub schedule: Vec<f64>,
    /// Required maximum edge residual.
    pub tol: f64,
}

impl Default for Figure5Options {
    fn default() -> Self {
        Self { schedule: vec![1e-1, 1e-2, 1e-3], tol: tol::CONSTRUCTION }
    }
}

fn sphere(m: &Norm2, a: Vec2, r1: f64, b: Vec2, r2: f64) -> Result<Vec2, BuildError> {
    sphere_intersect(m, a, r1, b, r2, Side::Left, tol::CONSTRUCTION)
        .map(|i| i.point)
        .map_err(|source| BuildError::Sphere { rule: "fig5", source })
}

/// Exact assembly under a strictly convex norm `m`, with `d = m(x - y) / 2`.
fn assemble(m: &Norm2, x: Vec2, y: Vec2) -> Result<[Vec2; 11], BuildError> {
    let sp = |source| BuildError::Sphere { rule: "fig5", source };
    let d = m.dist(x, y) / 2.0;
    let z = x.lerp(y, 0.5);
    let y1 = sphere(m, x, d, z, d)?;
    let x1 = y1 + (z - x);
    let a = z - x;
    let b = y1 - x;
    let ftol = 1e-9 * d.max(1.0);
    let first = OrientedFrame::new(m, a, b, d, ftol).map_err(sp)?;
    let (at, bt) = find_second_pair(&first, m).map_err(sp)?;
    let second = OrientedFrame::new(m, a, a - b, d, ftol).map_err(sp)?;
    let (at2, bt2) = find_second_pair(&second, m).map_err(sp)?;
    let yt1 = x1 - at;
    let zy = x1 - bt;
    let xt = x1 - at - bt;
    let xt1 = y1 + at2;
    let zx = y1 + bt2;
    let yt = y1 + at2 + bt2;
    Ok([x, y, z, xt, x1, xt1, yt, y1, yt1, zx, zy])
}

fn polish(n: &Norm2, pts: &mut [Vec2; 11], d: f64, edges: &[[usize; 2]]) -> f64 {
    let terms: Vec<Term> = edges.iter().map(|&[i, j]| Term::new(i, j, d)).collect();
    let mut fixed = [false; 11];
    fixed[..3].fill(true);
    let prob = Problem { norm: n, terms: &terms, fixed: &fixed };
    prob.solve(pts, Options { max_iter: 400, target: 1e-14 })
}

fn max_residual(n: &Norm2, pts: &[Vec2; 11], d: f64, edges: &[[usize; 2]]) -> f64 {
    edges
        .iter()
        .map(|&[i, j]| (n.dist(pts[i], pts[j]) - d).abs())
        .fold(0.0, f64::max)
}

/// Builds the configuration with all nineteen edges of length `n(x - y) / 2`.
///
/// Strictly convex norms are handled exactly through the sphere-matching
/// map. Other norms go through a continuation: assemble under
/// `strictify(n, lambda)` for each scheduled `lambda`, then polish under `n`.
pub fn figure5_config(x: Vec2, y: Vec2, n: &Norm2, opts: &Figure5Options) -> Result<WitnessSet, BuildError> {
    if x == y {
        return Err(BuildError::CoincidentAnchors);
    }
    let graph = ConfigGraph::figure5();
    let edges = graph.edges();
    let d = n.dist(x, y) / 2.0;
    let mut log = Vec::new();
    let mut best: Option<([Vec2; 11], f64)> = None;
    if n.claims_strictly_convex() {
        let mut pts = assemble(n, x, y)?;
        let res = polish(n, &mut pts, d, &edges);
        log.push(format!("direct residual={res:.3e}"));
        best = Some((pts, res));
    } else {
        for &lambda in &opts.schedule {
            let m = n
                .strictify(lambda)
                .map_err(|e| BuildError::Invariant(e.to_string()))?;
            let Ok(mut pts) = assemble(&m, x, y) else {
                log.push(format!("lambda={lambda} assembly failed"));
                continue;
            };
            let before = max_residual(n, &pts, d, &edges);
            let res = polish(n, &mut pts, d, &edges);
            log.push(format!("lambda={lambda} residual {before:.3e} -> {res:.3e}"));
            if best.as_ref().map_or(true, |b| res < b.1) {
                best = Some((pts, res));
            }
            if res <= opts.tol {
                break;
            }
        }
    }
    let (pts, res) = best.ok_or(BuildError::Polish(f64::INFINITY))?;
    if !(res <= opts.tol) {
        return Err(BuildError::Polish(res));
    }
    let extra: Vec<String> = (0..11)
        .flat_map(|i| (i + 1..11).map(move |j| (i, j)))
        .filter(|&(i, j)| graph.adjacency[i][j] == 0 && (n.dist(pts[i], pts[j]) - d).abs() <= opts.tol.max(1e-9))
        .map(|(i, j)| format!("{}-{}", LABELS[i], LABELS[j]))
        .collect();
    if !extra.is_empty() {
        log.push(format!("extra d-pairs: {}", extra.join(",")));
    }
    let points = pts
        .iter()
        .enumerate()
        .map(|(id, &xy)| Point { id, label: LABELS[id].to_string(), xy })
        .collect();
    let children = edges
        .iter()
        .map(|&e| TraceNode::leaf(Rule::Base, e, Some(Rational::ONE)))
        .collect();
    let w = WitnessSet {
        rho: d,
        source_norm: n.clone(),
        points,
        edges,
        anchors: Anchors { x: 0, y: 1 },
        target_distance: 2.0 * d,
        approximate: false,
        eps: None,
        trace: TraceNode {
            rule: Rule::Fig5,
            ends: [0, 1],
            ratio: Some(Rational::integer(2)),
            note: Some(log.join("; ")),
            children,
        },
        config_graph: Some(graph),
    };
    w.validate(opts.tol.max(1e-9) * d.max(1.0))?;
    Ok(w)
}

/// Pairs at distance `d` (within `tol`) in the configuration's own norm.
pub fn distance_pairs(w: &WitnessSet, d: f64, tol: f64) -> Vec<[usize; 2]> {
    let n = w.points.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (w.source_norm.dist(w.points[i].xy, w.points[j].xy) - d).abs() <= tol {
                out.push([i, j]);
            }
        }
    }
    out
}
