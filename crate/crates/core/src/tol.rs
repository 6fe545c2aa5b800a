//! Default numeric tolerances shared across the crate.

/// Tolerance used while building witness sets.
pub const CONSTRUCTION: f64 = 1e-9;

/// Tolerance used when judging placements into a target plane.
pub const VERIFY: f64 = 1e-6;

/// Points closer than this (Euclidean) are merged when building.
pub const DEDUP: f64 = 1e-9;

/// Images closer than this count as the same point for injectivity.
pub const INJECTIVE: f64 = 1e-7;

/// Radii within this of external/internal tangency are classified as touching.
pub const TANGENCY: f64 = 1e-9;

/// Relative determinant threshold below which three points count as collinear.
pub const COLLINEAR: f64 = 1e-12;
