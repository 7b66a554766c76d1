use thiserror::Error;

/// Errors raised by geometric operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unbounded polyhedron: {0}")]
    Unbounded(String),

    #[error("origin is not strictly interior: {0}")]
    PolarityDomain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient dimension {0} is odd; a symplectic space needs even dimension")]
    OddDimension(usize),

    #[error("invalid exponent p = {0}; need p >= 1")]
    InvalidExponent(f64),

    #[error("capability limit: {0}")]
    Capability(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("body is not centrally symmetric: {0}")]
    Asymmetric(String),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("plane is not symplectic: omega(u, v) = {0}")]
    NotSymplectic(f64),

    #[error("bisection could not bracket the root: {0}")]
    NoBracket(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("already self-polar within tolerance (max polar gauge {0})")]
    AlreadySelfPolar(f64),

    #[error("capacity bracket inverted: lower {lower} > upper {upper} ({detail})")]
    BracketInversion { lower: f64, upper: f64, detail: String },

    #[error("optimizer failed: {0}")]
    Optimizer(String),

    #[error("curve needs refinement: {0}")]
    Refinement(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
