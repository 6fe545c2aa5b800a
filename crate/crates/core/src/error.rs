use thiserror::Error;

use crate::vec2::Vec2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("p-norm exponent must be >= 1 (or inf), got {0}")]
    BadExponent(f64),
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not centrally symmetric: no vertex opposite {0}")]
    NotSymmetric(Vec2),
    #[error("polygon is not strictly convex around the origin at vertex {0}")]
    NotConvex(Vec2),
    #[error("blend weight must lie in [0, 1], got {0}")]
    BadLambda(f64),
    #[error("strictify weight must lie in (0, 1], got {0}")]
    BadStrictifyLambda(f64),
    #[error("cannot parse norm flag {0:?}: {1}")]
    Parse(String, String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StarError {
    #[error("anchor points coincide")]
    DegenerateLine,
    #[error("point {0} lies on the line through the anchors")]
    OnLine(Vec2),
    #[error("points lie on opposite sides of the line through the anchors")]
    OppositeSides,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("centers coincide")]
    SameCenter,
    #[error("point {0} is collinear with the reference line")]
    Collinear(Vec2),
    #[error("spheres do not meet: |r1 - r2| = {gap_lo}, dist = {dist}, r1 + r2 = {gap_hi}")]
    Infeasible { dist: f64, gap_lo: f64, gap_hi: f64 },
    #[error("bisection did not converge, best residual {0}")]
    NoConvergence(f64),
    #[error("vector {0} is not on the sphere of radius {1}")]
    NotOnSphere(Vec2, f64),
    #[error("frame is not equilateral within tolerance (residual {0})")]
    BadFrame(f64),
    #[error("gap function never reaches the edge length on the searched arc (max {0})")]
    NoBracket(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error("endpoint distance {actual} does not match the required {expected}")]
    DistanceMismatch { expected: f64, actual: f64 },
    #[error("rho must be positive, got {0}")]
    BadRho(f64),
    #[error("eps must be positive, got {0}")]
    BadEps(f64),
    #[error("multiplier must be a positive integer")]
    BadMultiplier,
    #[error("{rule}: {source}")]
    Sphere {
        rule: &'static str,
        #[source]
        source: SphereError,
    },
    #[error("recursion depth cap {0} exceeded")]
    DepthExceeded(usize),
    #[error("conflicting rho values {0} and {1}")]
    ConflictingRho(f64, f64),
    #[error("nothing to merge")]
    EmptyMerge,
    #[error("figure-5 polish failed, best residual {0:e}")]
    Polish(f64),
    #[error("anchors coincide")]
    CoincidentAnchors,
    #[error("witness set invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("vertex {0} cannot be placed from two earlier neighbours while another free angle is open")]
    Ordering(usize),
    #[error("point set is disconnected: vertex {0} unreachable")]
    Disconnected(usize),
    #[error("branch cap of {0} leaves exceeded")]
    BranchCap(u64),
    #[error("witness set does not carry the labels x, y, x1, y1")]
    WrongShape,
    #[error("witness set is not flagged approximate")]
    NotApproximate,
    #[error("need at least {0} points")]
    TooFewPoints(usize),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("invalid witness set: {0}")]
    Invalid(#[from] BuildError),
}
