use std::f64::consts::TAU;

use super::{Mode, Placement, VerifyReport};
use crate::error::VerifyError;
use crate::lsq::{self, Problem, Term};
use crate::norm::Norm2;
use crate::roots;
use crate::sphere::{try_intersect_tangent, Side};
use crate::tol;
use crate::vec2::Vec2;
use crate::witness::WitnessSet;

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Samples for the first free direction.
    pub direction_grid: usize,
    /// Samples when sweeping a later angle for sign changes of its closing residual.
    pub root_grid: usize,
    pub tol: f64,
    /// Only injective placements count as violations.
    pub require_injective: bool,
    /// Drop branches as soon as two images coincide.
    pub prune_collisions: bool,
    pub leaf_cap: u64,
    /// Maximum placements kept in each list of the report.
    pub store_cap: usize,
    /// Also place points through the sub-segment distances asserted by the
    /// trace. Sound only together with [`super::check_trace`].
    pub inductive: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            direction_grid: 720,
            root_grid: 128,
            tol: tol::VERIFY,
            require_injective: true,
            prune_collisions: false,
            leaf_cap: 1 << 24,
            store_cap: 1 << 16,
            inductive: false,
        }
    }
}

/// Distance constraints to place: `(i, j, length, real)`. Real edges are
/// the ones a placement is judged by; the others are distances the trace
/// asserts and are used to steer the search.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64, bool)>,
    pub root: usize,
    pub anchors: [usize; 2],
    pub target_distance: f64,
    /// Free hinges are expected and get sampled.
    pub flexible: bool,
}

impl Graph {
    pub fn of_set(w: &WitnessSet) -> Self {
        Self {
            n: w.len(),
            edges: w.edges.iter().map(|&[i, j]| (i, j, w.rho, true)).collect(),
            root: w.anchors.x,
            anchors: [w.anchors.x, w.anchors.y],
            target_distance: w.target_distance,
            flexible: w.approximate,
        }
    }

    /// The `rho`-edges plus every sub-segment distance recorded in the trace.
    pub fn with_trace(w: &WitnessSet) -> Self {
        let mut g = Self::of_set(w);
        let mut seen: std::collections::HashSet<[usize; 2]> =
            w.edges.iter().copied().collect();
        let mut stack = vec![&w.trace];
        while let Some(node) = stack.pop() {
            stack.extend(node.children.iter().rev());
            let [a, b] = node.ends;
            let Some(r) = node.ratio else { continue };
            if a == b || r.num() == 0 || !seen.insert([a.min(b), a.max(b)]) {
                continue;
            }
            g.edges.push((a, b, r.to_f64() * w.rho, false));
        }
        g
    }

    pub fn evaluate(&self, norm: &Norm2, images: Vec<Vec2>) -> Placement {
        let max_edge_residual = self
            .edges
            .iter()
            .filter(|e| e.3)
            .map(|&(i, j, len, _)| (norm.dist(images[i], images[j]) - len).abs())
            .fold(0.0, f64::max);
        let [x, y] = self.anchors;
        let anchor_gap = norm.dist(images[x], images[y]) - self.target_distance;
        let injective = crate::witness::store_closest_pair(&images, tol::INJECTIVE).is_none();
        Placement { images, max_edge_residual, anchor_gap, injective }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Step {
    Root(usize),
    /// `v` at distance `r` from `p`, direction still free.
    Angle { v: usize, p: usize, r: f64 },
    /// `v` at distances `r1`, `r2` from `p1`, `p2`; `closes` are further
    /// placed neighbours whose distances must hold.
    Meet { v: usize, p1: usize, r1: f64, p2: usize, r2: f64, closes: Vec<(usize, f64)> },
}

impl Step {
    fn vertex(&self) -> usize {
        match *self {
            Step::Root(v) | Step::Angle { v, .. } | Step::Meet { v, .. } => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Unit {
    Root(usize),
    /// A single angle step tried at fixed directions.
    Free { step: usize, values: Vec<f64> },
    /// An angle step followed by meets up to the first closing step; the
    /// angle is root-solved on the closing residual.
    Solve { start: usize, end: usize, grid: usize },
    Meet(usize),
}

impl Unit {
    fn steps(&self) -> std::ops::RangeInclusive<usize> {
        match *self {
            Unit::Root(_) => 0..=0,
            Unit::Free { step, .. } | Unit::Meet(step) => step..=step,
            Unit::Solve { start, end, .. } => start..=end,
        }
    }
}

/// Orders the vertices so that each one after the first two is pinned by two
/// already placed neighbours whenever the graph allows it.
pub(crate) fn plan(g: &Graph) -> Result<Vec<Step>, VerifyError> {
    let n = g.n;
    if n == 0 {
        return Err(VerifyError::TooFewPoints(1));
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, len, _) in &g.edges {
        if i != j && !adj[i].iter().any(|&(u, _)| u == j) {
            adj[i].push((j, len));
            adj[j].push((i, len));
        }
    }
    let mut order: Vec<Option<usize>> = vec![None; n];
    order[g.root] = Some(0);
    let mut steps = vec![Step::Root(g.root)];
    for k in 1..n {
        // more placed neighbours first, then the most recent one, then the
        // shortest link (a long link tends to close a chain by tangency)
        let mut best: Option<((usize, usize, f64), usize)> = None;
        for v in 0..n {
            if order[v].is_some() {
                continue;
            }
            let mut count = 0;
            let mut latest = 0;
            let mut shortest = f64::INFINITY;
            for &(u, len) in &adj[v] {
                if let Some(o) = order[u] {
                    count += 1;
                    latest = latest.max(o);
                    shortest = shortest.min(len);
                }
            }
            if count == 0 {
                continue;
            }
            let key = (count.min(2), latest, -shortest);
            if best.map_or(true, |(b, _)| key.partial_cmp(&b) == Some(std::cmp::Ordering::Greater)) {
                best = Some((key, v));
            }
        }
        let Some(((count, _, _), v)) = best else {
            let v = order.iter().position(Option::is_none).unwrap_or(0);
            return Err(VerifyError::Disconnected(v));
        };
        let mut nbrs: Vec<(usize, f64)> = adj[v].iter().copied().filter(|&(u, _)| order[u].is_some()).collect();
        nbrs.sort_by_key(|&(u, _)| std::cmp::Reverse(order[u]));
        order[v] = Some(k);
        steps.push(if count == 1 {
            Step::Angle { v, p: nbrs[0].0, r: nbrs[0].1 }
        } else {
            Step::Meet {
                v,
                p1: nbrs[0].0,
                r1: nbrs[0].1,
                p2: nbrs[1].0,
                r2: nbrs[1].1,
                closes: nbrs[2..].to_vec(),
            }
        });
    }
    Ok(steps)
}

fn units(steps: &[Step], target: &Norm2, opts: &EnumerateOptions, flexible: bool) -> Result<Vec<Unit>, VerifyError> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut first_angle = true;
    while i < steps.len() {
        match &steps[i] {
            Step::Root(v) => {
                out.push(Unit::Root(*v));
                i += 1;
            }
            Step::Meet { .. } => {
                out.push(Unit::Meet(i));
                i += 1;
            }
            Step::Angle { .. } => {
                let mut j = i + 1;
                while matches!(steps.get(j), Some(Step::Meet { closes, .. }) if closes.is_empty()) {
                    j += 1;
                }
                let closed = matches!(steps.get(j), Some(Step::Meet { .. }));
                if first_angle && target.is_euclidean() {
                    // rotations are isometries; reflections are covered by the side branches
                    out.push(Unit::Free { step: i, values: vec![0.0] });
                    i += 1;
                } else if flexible && !first_angle {
                    // approximate sets hinge freely; sample the hinge
                    let g = opts.root_grid.max(1);
                    let values = (0..g).map(|k| TAU * k as f64 / g as f64).collect();
                    out.push(Unit::Free { step: i, values });
                    i += 1;
                } else if closed {
                    let grid = if first_angle { opts.direction_grid } else { opts.root_grid };
                    out.push(Unit::Solve { start: i, end: j, grid: grid.max(8) });
                    i = j + 1;
                } else if first_angle {
                    let g = opts.direction_grid.max(1);
                    let values = (0..g).map(|k| TAU * k as f64 / g as f64).collect();
                    out.push(Unit::Free { step: i, values });
                    i += 1;
                } else {
                    return Err(VerifyError::Ordering(i));
                }
                first_angle = false;
            }
        }
    }
    Ok(out)
}

/// For each unit, the last unit of the smallest run starting there whose
/// vertices are never referenced afterwards. Any single completion of such
/// a run is as good as any other for everything placed later.
fn groups(steps: &[Step], units: &[Unit], anchors: [usize; 2]) -> Vec<Option<usize>> {
    let mut last_ref = vec![0usize; steps.len()];
    for (s, step) in steps.iter().enumerate() {
        let mut touch = |v: usize| last_ref[v] = last_ref[v].max(s);
        match step {
            Step::Root(v) => touch(*v),
            Step::Angle { v, p, .. } => {
                touch(*v);
                touch(*p);
            }
            Step::Meet { v, p1, p2, closes, .. } => {
                for u in [*v, *p1, *p2].into_iter().chain(closes.iter().map(|c| c.0)) {
                    touch(u);
                }
            }
        }
    }
    for a in anchors {
        last_ref[a] = steps.len();
    }
    let mut unit_of_step = vec![0; steps.len()];
    for (u, unit) in units.iter().enumerate() {
        for s in unit.steps() {
            unit_of_step[s] = u;
        }
    }
    (0..units.len())
        .map(|u| {
            if u == 0 {
                return None;
            }
            let mut end = u;
            let mut k = u;
            while k <= end {
                for s in units[k].steps() {
                    let r = last_ref[steps[s].vertex()];
                    if r >= steps.len() {
                        return None;
                    }
                    end = end.max(unit_of_step[r]);
                }
                k += 1;
            }
            Some(end)
        })
        .collect()
}

struct Search<'a> {
    g: &'a Graph,
    norm: &'a Norm2,
    opts: &'a EnumerateOptions,
    steps: &'a [Step],
    units: &'a [Unit],
    group_end: &'a [Option<usize>],
    img: Vec<Vec2>,
    placed: Vec<usize>,
    frames: Vec<(usize, bool)>,
    report: VerifyReport,
}

impl Search<'_> {
    fn cut(&self, u: usize) -> bool {
        self.report.exhausted || self.frames.iter().any(|&(e, ok)| ok && e >= u)
    }

    fn collides(&self, p: Vec2) -> bool {
        self.opts.prune_collisions && self.placed.iter().any(|&q| (self.img[q] - p).euclid() <= tol::INJECTIVE)
    }

    fn closes_hold(&self, p: Vec2, closes: &[(usize, f64)]) -> bool {
        closes
            .iter()
            .all(|&(q, len)| (self.norm.dist(p, self.img[q]) - len).abs() <= self.opts.tol)
    }

    fn push(&mut self, v: usize, p: Vec2) {
        self.img[v] = p;
        self.placed.push(v);
    }

    fn go(&mut self, u: usize) {
        if self.report.exhausted {
            return;
        }
        if u == self.units.len() {
            self.leaf();
            return;
        }
        let framed = self.group_end[u].map(|e| self.frames.push((e, false))).is_some();
        match &self.units[u] {
            Unit::Root(v) => {
                self.push(*v, Vec2::ZERO);
                self.go(u + 1);
                self.placed.pop();
            }
            Unit::Free { step, values } => {
                let Step::Angle { v, p, r } = self.steps[*step] else { unreachable!() };
                for &theta in values {
                    if self.cut(u) {
                        break;
                    }
                    let pt = self.img[p] + self.norm.sphere_point(r, theta);
                    if self.collides(pt) {
                        continue;
                    }
                    self.push(v, pt);
                    self.go(u + 1);
                    self.placed.pop();
                }
            }
            Unit::Meet(step) => {
                let Step::Meet { v, p1, r1, p2, r2, ref closes } = self.steps[*step] else { unreachable!() };
                for side in [Side::Left, Side::Right] {
                    if self.cut(u) {
                        break;
                    }
                    let Some((pt, tangent)) = try_intersect_tangent(self.norm, self.img[p1], r1, self.img[p2], r2, side)
                    else {
                        continue;
                    };
                    if (tangent && side == Side::Right) || !self.closes_hold(pt, closes) || self.collides(pt) {
                        continue;
                    }
                    self.push(v, pt);
                    self.go(u + 1);
                    self.placed.pop();
                }
            }
            Unit::Solve { start, end, grid } => {
                let (start, end) = (*start, *end);
                for sol in self.solve_block(start, end, *grid) {
                    if self.cut(u) {
                        break;
                    }
                    let Step::Meet { ref closes, .. } = self.steps[end] else { unreachable!() };
                    if !self.closes_hold(sol[end - start], closes) {
                        continue;
                    }
                    let mut pushed = 0;
                    let mut ok = true;
                    for (k, &pt) in sol.iter().enumerate() {
                        if self.collides(pt) {
                            ok = false;
                            break;
                        }
                        self.push(self.steps[start + k].vertex(), pt);
                        pushed += 1;
                    }
                    if ok {
                        self.go(u + 1);
                    }
                    for _ in 0..pushed {
                        self.placed.pop();
                    }
                }
            }
        }
        if framed {
            self.frames.pop();
        }
    }

    fn block_pos(&self, start: usize, v: usize, buf: &[Vec2]) -> Vec2 {
        (start..start + buf.len())
            .find(|&t| self.steps[t].vertex() == v)
            .map_or(self.img[v], |t| buf[t - start])
    }

    fn close_residual(&self, start: usize, end: usize, buf: &[Vec2]) -> f64 {
        let Step::Meet { ref closes, .. } = self.steps[end] else { unreachable!() };
        let (q, len) = closes[0];
        self.norm.dist(buf[end - start], self.block_pos(start, q, buf)) - len
    }

    /// Positions of the block vertices for one angle and one side pattern,
    /// plus the residual of the first closing edge.
    fn block_eval(&self, start: usize, end: usize, theta: f64, mask: u32, buf: &mut Vec<Vec2>) -> Option<f64> {
        buf.clear();
        let Step::Angle { p, r, .. } = self.steps[start] else { unreachable!() };
        buf.push(self.img[p] + self.norm.sphere_point(r, theta));
        for s in start + 1..=end {
            let Step::Meet { p1, r1, p2, r2, .. } = self.steps[s] else { unreachable!() };
            let side = if mask >> (s - start - 1) & 1 == 0 { Side::Left } else { Side::Right };
            let (a, b) = (self.block_pos(start, p1, buf), self.block_pos(start, p2, buf));
            let (pt, tangent) = try_intersect_tangent(self.norm, a, r1, b, r2, side)?;
            if tangent && side == Side::Right {
                return None;
            }
            buf.push(pt);
        }
        Some(self.close_residual(start, end, buf))
    }

    /// Fills `out[mask]` with the closing residual at one angle for every
    /// side pattern, sharing the intersections of common prefixes.
    fn sweep_tree(&self, start: usize, end: usize, s: usize, mask: u32, buf: &mut Vec<Vec2>, out: &mut [f64]) {
        if s > end {
            out[mask as usize] = self.close_residual(start, end, buf);
            return;
        }
        let Step::Meet { p1, r1, p2, r2, .. } = self.steps[s] else { unreachable!() };
        let (a, b) = (self.block_pos(start, p1, buf), self.block_pos(start, p2, buf));
        let bit = (s - start - 1) as u32;
        for (k, side) in [Side::Left, Side::Right].into_iter().enumerate() {
            let m = mask | (k as u32) << bit;
            match try_intersect_tangent(self.norm, a, r1, b, r2, side).filter(|&(_, t)| !(t && k == 1)) {
                Some((pt, _)) => {
                    buf.push(pt);
                    self.sweep_tree(start, end, s + 1, m, buf, out);
                    buf.pop();
                }
                None => {
                    // every pattern extending this prefix is undefined here
                    for rest in 0..1u32 << (end - s) {
                        out[(m | rest << (bit + 1)) as usize] = f64::NAN;
                    }
                }
            }
        }
    }

    /// All solutions of one angle block: sign changes of the closing residual,
    /// grid angles where it already vanishes (a free hinge vanishes
    /// everywhere), and the ends of the angle ranges where some intersection
    /// exists, since configurations forced by touching spheres sit there.
    fn solve_block(&self, start: usize, end: usize, grid: usize) -> Vec<Vec<Vec2>> {
        let meets = end - start;
        let patterns = 1usize << meets;
        let mut buf = Vec::with_capacity(meets + 1);
        let step = TAU / grid as f64;
        let Step::Angle { p, r, .. } = self.steps[start] else { unreachable!() };
        let mut vals = vec![f64::NAN; grid * patterns];
        for k in 0..grid {
            buf.clear();
            buf.push(self.img[p] + self.norm.sphere_point(r, k as f64 * step));
            self.sweep_tree(start, end, start + 1, 0, &mut buf, &mut vals[k * patterns..(k + 1) * patterns]);
        }
        let mut out: Vec<Vec<Vec2>> = Vec::new();
        let accept = |theta: f64, mask: u32, out: &mut Vec<Vec<Vec2>>| {
            let mut b = Vec::with_capacity(meets + 1);
            match self.block_eval(start, end, theta, mask, &mut b) {
                Some(res) if res.abs() <= self.opts.tol => {
                    let dup = out.iter().any(|o| o.iter().zip(&b).all(|(u, v)| (*u - *v).euclid() <= tol::INJECTIVE));
                    if !dup {
                        out.push(b);
                    }
                }
                _ => {}
            }
        };
        for mask in 0..patterns as u32 {
            let f = |t: f64| {
                let mut b = Vec::with_capacity(meets + 1);
                self.block_eval(start, end, t, mask, &mut b).unwrap_or(f64::NAN)
            };
            for k in 0..grid {
                let (fa, fb) = (vals[k * patterns + mask as usize], vals[(k + 1) % grid * patterns + mask as usize]);
                let (ta, tb) = (k as f64 * step, (k + 1) as f64 * step);
                if fa.abs() <= HINGE_ZERO * r {
                    accept(ta, mask, &mut out);
                } else if fa.abs() <= self.opts.tol {
                    // a touching root: grid points near it pass the tolerance
                    // with the configuration still about sqrt(tol) away
                    accept(touch_point(&f, ta - step, ta + step), mask, &mut out);
                }
                if fa * fb < 0.0 {
                    accept(roots::bracketed(f, ta, tb, fa, fb), mask, &mut out);
                } else if fa.is_nan() != fb.is_nan() && fa.abs().min(fb.abs()) <= 0.5 * r {
                    let (mut good, mut bad) = if fa.is_nan() { (tb, ta) } else { (ta, tb) };
                    for _ in 0..80 {
                        let mid = 0.5 * (good + bad);
                        if mid == good || mid == bad {
                            break;
                        }
                        if f(mid).is_nan() {
                            bad = mid;
                        } else {
                            good = mid;
                        }
                    }
                    accept(good, mask, &mut out);
                }
            }
        }
        out
    }

    fn leaf(&mut self) {
        let mut p = self.g.evaluate(self.norm, self.img.clone());
        if p.max_edge_residual > self.opts.tol && p.max_edge_residual <= 1e-3 && self.g.n <= 200 {
            let mut imgs = p.images.clone();
            polish(self.g, self.norm, &mut imgs);
            p = self.g.evaluate(self.norm, imgs);
        }
        self.report.search_budget_used += 1;
        if self.report.search_budget_used >= self.opts.leaf_cap {
            self.report.exhausted = true;
        }
        if p.max_edge_residual > self.opts.tol {
            return;
        }
        if p.injective || !self.opts.require_injective {
            for f in &mut self.frames {
                f.1 = true;
            }
        }
        self.report.record(p, self.opts.require_injective, self.opts.store_cap);
    }
}

fn polish(g: &Graph, norm: &Norm2, imgs: &mut [Vec2]) {
    let terms: Vec<Term> = g.edges.iter().map(|&(i, j, len, _)| Term::new(i, j, len)).collect();
    let mut fixed = vec![false; imgs.len()];
    fixed[g.root] = true;
    Problem { norm, terms: &terms, fixed: &fixed }.solve(imgs, lsq::Options::default());
}

/// Closing residual treated as identically zero along a free hinge.
const HINGE_ZERO: f64 = 1e-12;

/// Golden-section minimum of `|f|` on `[lo, hi]`; undefined values count as
/// infinite.
fn touch_point(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = |t: f64| {
        let v = f(t).abs();
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let k = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - k * (hi - lo);
    let mut b = lo + k * (hi - lo);
    let (mut ga, mut gb) = (g(a), g(b));
    for _ in 0..80 {
        if ga <= gb {
            hi = b;
            b = a;
            gb = ga;
            a = hi - k * (hi - lo);
            ga = g(a);
        } else {
            lo = a;
            a = b;
            ga = gb;
            b = lo + k * (hi - lo);
            gb = g(b);
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    if ga <= gb {
        a
    } else {
        b
    }
}

pub(crate) fn violation_threshold(w: &WitnessSet, tol: f64) -> f64 {
    if w.approximate {
        w.eps.unwrap_or(0.0) + tol
    } else {
        tol
    }
}

/// Runs [`enumerate_placements_with`] with default options apart from the
/// direction grid and tolerance.
pub fn enumerate_placements(
    w: &WitnessSet,
    target: &Norm2,
    direction_grid: usize,
    tol: f64,
) -> Result<VerifyReport, VerifyError> {
    let opts = EnumerateOptions { direction_grid, tol, ..Default::default() };
    enumerate_placements_with(w, target, &opts)
}

/// Depth-first enumeration of every placement reachable by the plan's side
/// choices, with `f(x)` pinned at the origin.
pub fn enumerate_placements_with(
    w: &WitnessSet,
    target: &Norm2,
    opts: &EnumerateOptions,
) -> Result<VerifyReport, VerifyError> {
    let g = if opts.inductive { Graph::with_trace(w) } else { Graph::of_set(w) };
    enumerate_graph(&g, target, opts, violation_threshold(w, opts.tol))
}

pub(crate) fn enumerate_graph(
    g: &Graph,
    target: &Norm2,
    opts: &EnumerateOptions,
    threshold: f64,
) -> Result<VerifyReport, VerifyError> {
    let steps = plan(g)?;
    let units = units(&steps, target, opts, g.flexible)?;
    let group_end = groups(&steps, &units, g.anchors);
    let search = |report: VerifyReport| Search {
        g,
        norm: target,
        opts,
        steps: &steps,
        units: &units,
        group_end: &group_end,
        img: vec![Vec2::ZERO; g.n],
        placed: Vec::with_capacity(g.n),
        frames: Vec::new(),
        report,
    };
    let fresh = || VerifyReport::new(Mode::Enumerate, opts.tol, threshold);

    // Directions of the first free angle are independent work items.
    if let (Some(Unit::Free { step, values }), None) = (units.get(1), group_end.get(1).copied().flatten()) {
        if values.len() > 1 {
            let Step::Angle { v, p, r } = steps[*step] else { unreachable!() };
            let root = steps[0].vertex();
            let run = |theta: &f64| {
                let mut s = search(fresh());
                s.push(root, Vec2::ZERO);
                s.push(v, s.img[p] + target.sphere_point(r, *theta));
                s.go(2);
                s.report
            };
            #[cfg(feature = "parallel")]
            let parts: Vec<VerifyReport> = {
                use rayon::prelude::*;
                values.par_iter().map(run).collect()
            };
            #[cfg(not(feature = "parallel"))]
            let parts: Vec<VerifyReport> = values.iter().map(run).collect();
            let mut report = fresh();
            for part in parts {
                report.merge(part, opts.store_cap);
            }
            report.exhausted |= report.search_budget_used >= opts.leaf_cap;
            return Ok(report);
        }
    }
    let mut s = search(fresh());
    s.go(0);
    Ok(s.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::witness::{base_pair, build_rational};

    fn q2() -> WitnessSet {
        build_rational(Vec2::ZERO, Vec2::new(2.0, 0.0), Rational::integer(2), 1.0, &Norm2::euclidean()).unwrap()
    }

    #[test]
    fn plan_pins_every_point_after_the_first_direction() {
        let steps = plan(&Graph::of_set(&q2())).unwrap();
        assert_eq!(steps.len(), 5);
        assert!(matches!(steps[1], Step::Angle { .. }));
        assert!(steps[2..].iter().all(|s| matches!(s, Step::Meet { .. })));
    }

    #[test]
    fn q2_euclidean_has_eight_leaves() {
        let r = enumerate_placements(&q2(), &Norm2::euclidean(), 720, 1e-6).unwrap();
        assert_eq!(r.search_budget_used, 8);
        assert!(r.injective_found >= 1);
        assert!(r.violations.is_empty());
        assert!(r
            .placements
            .iter()
            .filter(|p| p.injective)
            .all(|p| p.anchor_gap.abs() <= 1e-6));
    }

    #[test]
    fn q2_collapse_branch_has_anchor_distance_one() {
        let r = enumerate_placements(&q2(), &Norm2::euclidean(), 720, 1e-6).unwrap();
        assert!(r
            .non_injective_found
            .iter()
            .any(|p| (p.anchor_gap + 1.0).abs() <= 1e-6));
    }

    #[test]
    fn base_pair_gap_is_zero() {
        let w = base_pair(Vec2::ZERO, Vec2::new(0.3, 0.4), 0.5, &Norm2::euclidean()).unwrap();
        let r = enumerate_placements(&w, &Norm2::p(3.0).unwrap(), 36, 1e-6).unwrap();
        assert_eq!(r.placements_found, 36);
        assert!(r.placements.iter().all(|p| p.anchor_gap.abs() <= 1e-12));
    }

    #[test]
    fn q2_strictly_convex_target_keeps_distance() {
        let r = enumerate_placements(&q2(), &Norm2::p(1.5).unwrap(), 90, 1e-6).unwrap();
        assert!(r.injective_found >= 90);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn half_is_found_at_a_tangency() {
        let e = Norm2::euclidean();
        let q = Rational::new(1, 2).unwrap();
        let w = build_rational(Vec2::ZERO, Vec2::new(0.5, 0.0), q, 1.0, &e).unwrap();
        let r = enumerate_placements(&w, &e, 720, 1e-6).unwrap();
        assert!(r.injective_found >= 1);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn nested_hinges_need_the_inductive_mode() {
        let e = Norm2::euclidean();
        let q = Rational::new(1, 3).unwrap();
        let w = build_rational(Vec2::ZERO, Vec2::new(q.to_f64(), 0.0), q, 1.0, &e).unwrap();
        assert!(matches!(enumerate_placements(&w, &e, 720, 1e-6), Err(VerifyError::Ordering(_))));
        let opts = EnumerateOptions { inductive: true, prune_collisions: true, ..Default::default() };
        let r = enumerate_placements_with(&w, &e, &opts).unwrap();
        assert!(r.injective_found >= 1);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn approximate_hinge_is_sampled() {
        let e = Norm2::euclidean();
        let w = crate::witness::approx_set(Vec2::ZERO, Vec2::new(1.0, 1.0), 0.1, 1.0, &e).unwrap();
        let opts = EnumerateOptions { inductive: true, prune_collisions: true, ..Default::default() };
        let r = enumerate_placements_with(&w, &e, &opts).unwrap();
        assert_eq!(r.injective_found, opts.root_grid as u64);
        let (lo, hi) = r.placements.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.anchor_gap), b.max(p.anchor_gap))
        });
        let s2 = 2f64.sqrt();
        assert!((lo - (1.35 - s2)).abs() < 1e-9 && (hi - (1.45 - s2)).abs() < 1e-9, "{lo} {hi}");
    }
}
