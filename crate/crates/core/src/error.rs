use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("point {z} lies outside the closed unit disc (|z| = {modulus})")]
    OutsideDisc { z: String, modulus: f64 },

    #[error("boundary evaluation requires a boundary-regular function (exact polynomial or negligible tail)")]
    BoundaryNotRegular,

    #[error("grid size {0} must be a power of two and at least 2")]
    GridSize(usize),

    #[error("radius {0} must lie in (0, 1]")]
    Radius(f64),

    #[error("pole within {distance:e} of sample point {z}")]
    PoleProximity { z: String, distance: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("kernel coefficient at index {index} is {value}, expected 1")]
    NotNormalized { index: usize, value: String },

    #[error("leading coefficient at index {0} vanishes")]
    ZeroLeadingCoefficient(usize),

    #[error("bisection bracket does not straddle the target: f(lo) = {lo}, f(hi) = {hi}, target = {target}")]
    Bracket { lo: f64, hi: f64, target: f64 },

    #[error("a norm of this order needs a boundary grid, not a coefficient vector")]
    GridRequired,

    #[error("kernel is not certified BAP: {0}")]
    NotCertified(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("malformed series: {0}")]
    MalformedSeries(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;
