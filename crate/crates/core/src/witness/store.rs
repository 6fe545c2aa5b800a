use std::collections::HashMap;

use crate::tol;
use crate::vec2::Vec2;

const CELL: f64 = 1e-6;

fn cell(p: Vec2) -> (i64, i64) {
    ((p.x / CELL).floor() as i64, (p.y / CELL).floor() as i64)
}

/// Point list with coordinate deduplication through a spatial hash.
#[derive(Clone, Debug, Default)]
pub(crate) struct PointStore {
    pub points: Vec<Vec2>,
    pub labels: Vec<String>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl PointStore {
    pub fn find(&self, p: Vec2) -> Option<usize> {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(cx + dx, cy + dy)) {
                    for &k in ids {
                        if (self.points[k] - p).euclid() <= tol::DEDUP * p.euclid().max(1.0) {
                            return Some(k);
                        }
                    }
                }
            }
        }
        None
    }

    /// Index of `p`, inserting it with `label` if no stored point is within
    /// the dedup tolerance.
    pub fn insert(&mut self, p: Vec2, label: impl FnOnce() -> String) -> usize {
        if let Some(k) = self.find(p) {
            return k;
        }
        let k = self.points.len();
        self.points.push(p);
        self.labels.push(label());
        self.grid.entry(cell(p)).or_default().push(k);
        k
    }
}

/// Some pair of points closer than `tol` (Euclidean, scaled like the store), if any.
pub(crate) fn closest_pair_within(points: &[Vec2], tol: f64) -> Option<(usize, usize)> {
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, &p) in points.iter().enumerate() {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in ids {
                        if (points[j] - p).euclid() <= tol * p.euclid().max(1.0) {
                            return Some((j, k));
                        }
                    }
                }
            }
        }
        grid.entry((cx, cy)).or_default().push(k);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedups_across_cell_borders() {
        let mut s = PointStore::default();
        let a = s.insert(Vec2::new(1e-6 - 1e-13, 0.0), || "a".into());
        let b = s.insert(Vec2::new(1e-6 + 1e-13, 0.0), || "b".into());
        assert_eq!(a, b);
        let c = s.insert(Vec2::new(2e-6, 0.0), || "c".into());
        assert_ne!(a, c);
        assert_eq!(s.points.len(), 2);
        assert_eq!(s.labels, ["a", "c"]);
    }

    #[test]
    fn closest_pair() {
        let pts = [Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(1.0, 1e-12)];
        assert_eq!(closest_pair_within(&pts, 1e-9), Some((1, 2)));
        assert_eq!(closest_pair_within(&pts[..2], 1e-9), None);
    }
}
