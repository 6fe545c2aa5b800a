use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_graph, Graph};
use super::EnumerateOptions;
use crate::norm::Norm2;
use crate::rational::Rational;
use crate::witness::{Rule, TraceNode, WitnessSet};

/// A trace node whose local claim failed in the target plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeFailure {
    pub rule: Rule,
    pub ends: [usize; 2],
    pub ratio: Option<Rational>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    /// Construction nodes visited.
    pub nodes: usize,
    /// Distinct local problems actually enumerated.
    pub distinct: usize,
    pub leaves: u64,
    pub failures: Vec<NodeFailure>,
}

impl TraceCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

type Key = (Rule, Option<Rational>, Vec<(usize, usize, Option<Rational>)>);

/// The local graph of one construction step: its endpoints plus the
/// endpoints of its sub-segments, joined at the sub-segment distances.
fn local(node: &TraceNode, w: &WitnessSet) -> (Graph, Key) {
    let mut ids: Vec<usize> = Vec::new();
    let idx = |v: usize, ids: &mut Vec<usize>| {
        ids.iter().position(|&u| u == v).unwrap_or_else(|| {
            ids.push(v);
            ids.len() - 1
        })
    };
    let a = idx(node.ends[0], &mut ids);
    let b = idx(node.ends[1], &mut ids);
    let mut edges = Vec::new();
    let mut shape = Vec::new();
    for c in &node.children {
        let (i, j) = (idx(c.ends[0], &mut ids), idx(c.ends[1], &mut ids));
        shape.push((i, j, c.ratio));
        let Some(r) = c.ratio else { continue };
        if i != j && r.num() > 0 {
            edges.push((i, j, r.to_f64() * w.rho, true));
        }
    }
    let approx = node.rule == Rule::Fig4;
    let target_distance = if approx {
        w.target_distance
    } else {
        node.ratio.map_or(0.0, |r| r.to_f64() * w.rho)
    };
    let g = Graph { n: ids.len(), edges, root: a, anchors: [a, b], target_distance, flexible: approx };
    (g, (node.rule, node.ratio, shape))
}

/// Checks every construction step of the trace on its own: in every
/// injective placement of the step's local graph into the target plane, the
/// endpoints keep their asserted distance (within `eps` for the
/// approximation step). Together these give the claim for the whole set by
/// induction over the trace, and justify the inductive enumeration mode.
pub fn check_trace(w: &WitnessSet, target: &Norm2, opts: &EnumerateOptions) -> TraceCheck {
    let mut out = TraceCheck::default();
    let mut cache: HashMap<Key, Option<String>> = HashMap::new();
    let local_opts = EnumerateOptions { require_injective: true, inductive: false, ..opts.clone() };
    let mut stack = vec![&w.trace];
    while let Some(node) = stack.pop() {
        stack.extend(node.children.iter().rev());
        if !matches!(node.rule, Rule::Fig1 | Rule::Fig2 | Rule::Fig3 | Rule::Fig4) || node.ends[0] == node.ends[1] {
            continue;
        }
        out.nodes += 1;
        let (g, key) = local(node, w);
        let reason = cache.entry(key).or_insert_with(|| {
            out.distinct += 1;
            let threshold = if g.flexible { w.eps.unwrap_or(0.0) + opts.tol } else { opts.tol };
            match enumerate_graph(&g, target, &local_opts, threshold) {
                Err(e) => Some(e.to_string()),
                Ok(r) => {
                    out.leaves += r.search_budget_used;
                    if let Some(v) = r.violations.first() {
                        Some(format!("injective placement with anchor gap {:e}", v.anchor_gap))
                    } else if r.exhausted {
                        Some("branch cap reached".into())
                    } else if r.injective_found == 0 {
                        Some("no injective placement found".into())
                    } else {
                        None
                    }
                }
            }
        });
        if let Some(reason) = reason {
            out.failures.push(NodeFailure { rule: node.rule, ends: node.ends, ratio: node.ratio, reason: reason.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2::Vec2;
    use crate::witness::{approx_set, build_rational};

    #[test]
    fn rational_sets_check_locally() {
        let e = Norm2::euclidean();
        for q in ["1/3", "5/4", "3/2"] {
            let q: Rational = q.parse().unwrap();
            let w = build_rational(Vec2::ZERO, Vec2::new(q.to_f64(), 0.0), q, 1.0, &e).unwrap();
            let c = check_trace(&w, &Norm2::p(3.0).unwrap(), &EnumerateOptions { direction_grid: 90, ..Default::default() });
            assert!(c.holds(), "{q}: {:?}", c.failures);
            assert!(c.distinct <= c.nodes);
        }
    }

    #[test]
    fn approximation_step_respects_eps() {
        let e = Norm2::euclidean();
        let w = approx_set(Vec2::ZERO, Vec2::new(1.0, 1.0), 0.1, 1.0, &e).unwrap();
        let c = check_trace(&w, &e, &EnumerateOptions::default());
        assert!(c.holds(), "{:?}", c.failures);
    }
}
