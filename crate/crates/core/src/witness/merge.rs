use super::store::PointStore;
use super::{Point, Rule, TraceNode, WitnessSet};
use crate::error::BuildError;

/// Union of witness sets sharing `rho` and the source norm. Points are
/// merged by coordinate, edges re-indexed, traces concatenated under a
/// `merge` node. Anchors and target come from the first set.
pub fn dedup_and_merge(sets: &[WitnessSet]) -> Result<WitnessSet, BuildError> {
    let first = sets.first().ok_or(BuildError::EmptyMerge)?;
    let mut store = PointStore::default();
    let mut edges = std::collections::BTreeSet::new();
    let mut traces = Vec::with_capacity(sets.len());
    let mut anchors = first.anchors;
    for (k, s) in sets.iter().enumerate() {
        if s.rho != first.rho {
            return Err(BuildError::ConflictingRho(first.rho, s.rho));
        }
        let map: Vec<usize> = s
            .points
            .iter()
            .map(|p| store.insert(p.xy, || p.label.clone()))
            .collect();
        for &[i, j] in &s.edges {
            let (a, b) = (map[i], map[j]);
            edges.insert([a.min(b), a.max(b)]);
        }
        let mut t = s.trace.clone();
        t.remap(&map);
        traces.push(t);
        if k == 0 {
            anchors.x = map[s.anchors.x];
            anchors.y = map[s.anchors.y];
        }
    }
    let points = store
        .points
        .iter()
        .zip(store.labels)
        .enumerate()
        .map(|(id, (&xy, label))| Point { id, label, xy })
        .collect();
    let trace = if traces.len() == 1 {
        traces.pop().expect("one trace")
    } else {
        TraceNode {
            rule: Rule::Merge,
            ends: [anchors.x, anchors.y],
            ratio: None,
            note: None,
            children: traces,
        }
    };
    Ok(WitnessSet {
        rho: first.rho,
        source_norm: first.source_norm.clone(),
        points,
        edges: edges.into_iter().collect(),
        anchors,
        target_distance: first.target_distance,
        approximate: first.approximate,
        eps: first.eps,
        trace,
        config_graph: first.config_graph.clone(),
    })
}
