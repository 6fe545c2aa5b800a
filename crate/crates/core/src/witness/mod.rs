//! Finite witness sets: point sets whose `rho`-edges force the distance
//! between two anchor points under distance-`rho`-preserving maps.
//!
//! Builders only ever see the source norm. Nothing here depends on the
//! plane the set will later be mapped into.

mod approx;
mod build;
mod figure5;
mod merge;
mod store;

pub use approx::approx_set;
pub use build::{base_pair, build_rational, divide_set, double_set, multiply_set};
pub use figure5::{distance_pairs, figure5_config, ConfigGraph, Figure5Options, LABELS as FIGURE5_LABELS};
pub use merge::dedup_and_merge;
pub(crate) use store::closest_pair_within as store_closest_pair;

use serde::{Deserialize, Serialize};

use crate::error::BuildError;
use crate::norm::Norm2;
use crate::rational::Rational;
use crate::tol;
use crate::vec2::Vec2;

/// Which construction produced a trace node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Single point, distance zero.
    Point,
    /// Two points at distance `rho`.
    Base,
    /// Doubling through a midpoint and a translated apex pair.
    Fig1,
    /// Collinear chain of integer steps.
    Fig2,
    /// Division through an apex and two scaled copies.
    Fig3,
    /// Approximation through an intermediate point.
    Fig4,
    /// The eleven-point configuration.
    Fig5,
    /// Sub-segment already built earlier in the same construction.
    Memo,
    /// Union of independently built sets.
    Merge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceNode {
    pub rule: Rule,
    /// Point ids of the segment endpoints.
    pub ends: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    pub fn leaf(rule: Rule, ends: [usize; 2], ratio: Option<Rational>) -> Self {
        Self { rule, ends, ratio, note: None, children: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(TraceNode::depth).max().unwrap_or(0)
    }

    pub fn count(&self, rule: Rule) -> usize {
        usize::from(self.rule == rule) + self.children.iter().map(|c| c.count(rule)).sum::<usize>()
    }

    fn remap(&mut self, map: &[usize]) {
        self.ends = [map[self.ends[0]], map[self.ends[1]]];
        for c in &mut self.children {
            c.remap(map);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub id: usize,
    pub label: String,
    pub xy: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Anchors {
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSet {
    pub rho: f64,
    pub source_norm: Norm2,
    pub points: Vec<Point>,
    pub edges: Vec<[usize; 2]>,
    pub anchors: Anchors,
    pub target_distance: f64,
    pub approximate: bool,
    pub eps: Option<f64>,
    pub trace: TraceNode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_graph: Option<ConfigGraph>,
}

impl WitnessSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coords(&self) -> Vec<Vec2> {
        self.points.iter().map(|p| p.xy).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    pub fn anchor_points(&self) -> (Vec2, Vec2) {
        (self.points[self.anchors.x].xy, self.points[self.anchors.y].xy)
    }

    /// Largest `|n(p_i - p_j) - rho|` over the edges, in the source norm.
    pub fn max_edge_residual(&self) -> f64 {
        self.edges
            .iter()
            .map(|&[i, j]| (self.source_norm.dist(self.points[i].xy, self.points[j].xy) - self.rho).abs())
            .fold(0.0, f64::max)
    }

    /// Checks edge lengths, the anchor distance, anchor distinctness, ids
    /// and point uniqueness.
    pub fn validate(&self, tol: f64) -> Result<(), BuildError> {
        let bad = |m: String| Err(BuildError::Invariant(m));
        for (k, p) in self.points.iter().enumerate() {
            if p.id != k {
                return bad(format!("point {k} carries id {}", p.id));
            }
            if !p.xy.is_finite() {
                return bad(format!("point {k} is not finite"));
            }
        }
        let n = self.points.len();
        for &[i, j] in &self.edges {
            if i >= n || j >= n || i == j {
                return bad(format!("edge [{i}, {j}] is out of range"));
            }
        }
        if self.anchors.x >= n || self.anchors.y >= n {
            return bad("anchor out of range".into());
        }
        let res = self.max_edge_residual();
        if !(res <= tol) {
            return bad(format!("edge residual {res:e} exceeds {tol:e}"));
        }
        let (ax, ay) = self.anchor_points();
        let gap = (self.source_norm.dist(ax, ay) - self.target_distance).abs();
        if !(gap <= tol) {
            return bad(format!("anchor distance off by {gap:e}"));
        }
        if self.anchors.x == self.anchors.y && self.target_distance != 0.0 {
            return bad("anchors coincide but the target distance is positive".into());
        }
        if let Some((i, j)) = store::closest_pair_within(&self.coords(), tol::DEDUP) {
            return bad(format!("points {i} and {j} coincide"));
        }
        Ok(())
    }
}
