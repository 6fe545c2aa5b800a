//! Searching for distance-`rho`-preserving placements of a witness set into
//! a target plane, and judging whether they keep the anchor distance.
//!
//! Two independent routes: exhaustive branch enumeration over sphere
//! intersections, and randomized penalty minimization.

mod checks;
mod enumerate;
mod equilateral;
mod falsify;
mod inductive;

pub use checks::{approx_gap_check, check_non_collapse};
pub use enumerate::{enumerate_placements, enumerate_placements_with, EnumerateOptions};
pub use equilateral::{equilateral_search, EquilateralResult};
pub use falsify::{falsify, falsify_with, FalsifyOptions};
pub use inductive::{check_trace, NodeFailure, TraceCheck};

use serde::{Deserialize, Serialize};

use crate::norm::Norm2;
use crate::tol;
use crate::vec2::Vec2;
use crate::witness::{store_closest_pair, WitnessSet};

/// An assignment of target-plane images to the points of a witness set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub images: Vec<Vec2>,
    pub max_edge_residual: f64,
    /// `n(f(x) - f(y)) - target_distance`.
    pub anchor_gap: f64,
    pub injective: bool,
}

impl Placement {
    pub fn evaluate(w: &WitnessSet, target: &Norm2, images: Vec<Vec2>) -> Self {
        let max_edge_residual = w
            .edges
            .iter()
            .map(|&[i, j]| (target.dist(images[i], images[j]) - w.rho).abs())
            .fold(0.0, f64::max);
        let anchor_gap = target.dist(images[w.anchors.x], images[w.anchors.y]) - w.target_distance;
        let injective = store_closest_pair(&images, tol::INJECTIVE).is_none();
        Self { images, max_edge_residual, anchor_gap, injective }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Enumerate,
    Falsify,
}

/// Overall verdict of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// No violation and the search completed.
    Holds,
    /// At least one consistent placement moves the anchor distance.
    Violated,
    /// The search hit its budget before completing.
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Holds => 0,
            Outcome::Violated => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: Mode,
    /// Consistent placements (every edge within tolerance) found.
    pub placements_found: u64,
    pub injective_found: u64,
    /// Consistent placements whose anchor gap exceeds the threshold.
    pub violations: Vec<Placement>,
    pub non_injective_found: Vec<Placement>,
    /// Stored consistent placements, up to the store cap.
    pub placements: Vec<Placement>,
    /// Leaves visited (enumeration) or restarts run (falsification).
    pub search_budget_used: u64,
    pub exhausted: bool,
    /// Set when more placements were found than stored.
    pub truncated: bool,
    pub tol: f64,
    /// `|anchor_gap|` above this counts as a violation.
    pub violation_threshold: f64,
}

impl VerifyReport {
    fn new(mode: Mode, tol: f64, violation_threshold: f64) -> Self {
        Self {
            mode,
            placements_found: 0,
            injective_found: 0,
            violations: Vec::new(),
            non_injective_found: Vec::new(),
            placements: Vec::new(),
            search_budget_used: 0,
            exhausted: false,
            truncated: false,
            tol,
            violation_threshold,
        }
    }

    pub fn outcome(&self) -> Outcome {
        if !self.violations.is_empty() {
            Outcome::Violated
        } else if self.exhausted || (self.mode == Mode::Enumerate && self.injective_found == 0) {
            // an enumeration that found nothing proves nothing
            Outcome::Inconclusive
        } else {
            Outcome::Holds
        }
    }

    /// Files a consistent placement. `require_injective` decides whether a
    /// non-injective placement can count as a violation.
    fn record(&mut self, p: Placement, require_injective: bool, store_cap: usize) {
        self.placements_found += 1;
        if p.injective {
            self.injective_found += 1;
        }
        let violates = p.anchor_gap.abs() > self.violation_threshold && (p.injective || !require_injective);
        if violates && self.violations.len() < store_cap {
            self.violations.push(p.clone());
        }
        if !p.injective && self.non_injective_found.len() < store_cap {
            self.non_injective_found.push(p.clone());
        }
        if self.placements.len() < store_cap {
            self.placements.push(p);
        } else {
            self.truncated = true;
        }
    }

    fn merge(&mut self, other: VerifyReport, store_cap: usize) {
        self.placements_found += other.placements_found;
        self.injective_found += other.injective_found;
        self.search_budget_used += other.search_budget_used;
        self.exhausted |= other.exhausted;
        self.truncated |= other.truncated;
        for (dst, src) in [
            (&mut self.violations, other.violations),
            (&mut self.non_injective_found, other.non_injective_found),
        ] {
            let room = store_cap.saturating_sub(dst.len());
            dst.extend(src.into_iter().take(room));
        }
        let room = store_cap.saturating_sub(self.placements.len());
        if other.placements.len() > room {
            self.truncated = true;
        }
        self.placements.extend(other.placements.into_iter().take(room));
    }
}
