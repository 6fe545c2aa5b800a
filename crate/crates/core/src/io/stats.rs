use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::BuildError;
use crate::norm::Norm2;
use crate::rational::Rational;
use crate::vec2::Vec2;
use crate::witness::build_rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub q: Rational,
    pub points: usize,
    pub edges: usize,
    pub depth: usize,
}

/// Witness set sizes for every distinct `q = m/n` with `1 <= m <= max_m`,
/// `1 <= n <= max_n`, in increasing order of `q`.
pub fn stats_table(max_m: u64, max_n: u64, rho: f64, norm: &Norm2) -> Result<Vec<StatsRow>, BuildError> {
    let mut qs = BTreeSet::new();
    for m in 1..=max_m {
        for n in 1..=max_n {
            qs.insert(Rational::new(m, n).expect("n >= 1"));
        }
    }
    let mut qs: Vec<Rational> = qs.into_iter().collect();
    qs.sort_by(|a, b| (a.num() * b.den()).cmp(&(b.num() * a.den())));
    qs.into_iter()
        .map(|q| {
            let y = norm.sphere_point(q.to_f64() * rho, 0.0);
            let w = build_rational(Vec2::ZERO, y, q, rho, norm)?;
            Ok(StatsRow { q, points: w.len(), edges: w.edges.len(), depth: w.trace.depth() })
        })
        .collect()
}

impl StatsRow {
    pub fn csv(rows: &[StatsRow]) -> String {
        let mut s = String::from("q,points,edges,depth\n");
        for r in rows {
            let _ = writeln!(s, "{},{},{},{}", r.q, r.points, r.edges, r.depth);
        }
        s
    }

    pub fn text(rows: &[StatsRow]) -> String {
        let mut s = format!("{:>8} {:>8} {:>8} {:>6}\n", "q", "points", "edges", "depth");
        for r in rows {
            let _ = writeln!(s, "{:>8} {:>8} {:>8} {:>6}", r.q.to_string(), r.points, r.edges, r.depth);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_rows() {
        let rows = stats_table(2, 2, 1.0, &Norm2::euclidean()).unwrap();
        let get = |q: &str| rows.iter().find(|r| r.q.to_string() == q).unwrap().clone();
        assert_eq!(rows.len(), 3);
        assert_eq!((get("1/1").points, get("1/1").edges), (2, 1));
        assert_eq!((get("2/1").points, get("2/1").edges), (5, 7));
        assert_eq!(get("1/2").points, 9);
        assert_eq!(rows[0].q.to_string(), "1/2");
        assert!(StatsRow::csv(&rows).starts_with("q,points,edges,depth\n1/2,9,"));
    }
}
