//! Flat-file persistence, SVG figures and the size table.

mod stats;
mod svg;

pub use stats::{stats_table, StatsRow};
pub use svg::{render_svg, SvgOptions};

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::IoError;
use crate::tol;
use crate::witness::WitnessSet;

/// Pretty JSON with a trailing newline. Numbers use the shortest
/// representation that parses back to the same `f64`, so writing what was
/// read reproduces the file byte for byte.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Parses a witness set and checks its invariants at the verification
/// tolerance.
pub fn witness_from_json(text: &str) -> Result<WitnessSet, IoError> {
    let w: WitnessSet = from_json(text)?;
    w.validate(tol::VERIFY)?;
    Ok(w)
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn read_witness(path: &Path) -> Result<WitnessSet, IoError> {
    witness_from_json(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::Norm2;
    use crate::rational::Rational;
    use crate::vec2::Vec2;
    use crate::witness::{approx_set, build_rational};

    #[test]
    fn round_trip_is_byte_identical() {
        let n = Norm2::p(1.5).unwrap();
        let q = Rational::new(3, 2).unwrap();
        let w = build_rational(Vec2::ZERO, n.sphere_point(1.5, 0.7), q, 1.0, &n).unwrap();
        let a = to_json(&w);
        let b = to_json(&witness_from_json(&a).unwrap());
        assert_eq!(a, b);
        let w = approx_set(Vec2::ZERO, Vec2::new(1.0, 1.0), 0.1, 1.0, &Norm2::euclidean()).unwrap();
        let a = to_json(&w);
        assert_eq!(a, to_json(&witness_from_json(&a).unwrap()));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(witness_from_json("{"), Err(IoError::Schema(_))));
        let w = build_rational(Vec2::ZERO, Vec2::new(2.0, 0.0), Rational::integer(2), 1.0, &Norm2::euclidean()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&to_json(&w)).unwrap();
        v["bogus"] = 1.into();
        assert!(matches!(witness_from_json(&v.to_string()), Err(IoError::Schema(_))));
        let mut v: serde_json::Value = serde_json::from_str(&to_json(&w)).unwrap();
        v["points"][2]["xy"][0] = 5.0.into();
        assert!(matches!(witness_from_json(&v.to_string()), Err(IoError::Invalid(_))));
    }
}
