use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative coefficient {value} at (x={x}, y={y}, z={z})")]
    NegativeCoefficient {
        x: usize,
        y: usize,
        z: usize,
        value: f64,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("coefficients sum to {total}, expected 1")]
    NotNormalized { total: f64 },
    #[error("size overflow: {0}")]
    Overflow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("vertex {0} has no neighbours")]
    IsolatedVertex(usize),
    #[error("dimension {0} is odd")]
    OddDimension(usize),
    #[error("graph with {n} vertices exceeds the exact-search cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid state {index}: {reason}")]
    InvalidState { index: usize, reason: String },
    #[error("invalid measurement {setting}: {reason}")]
    InvalidMeasurement { setting: usize, reason: String },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("moment structure too large: {size} monomials (cap {cap})")]
    SizeExceeded { size: usize, cap: usize },
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("even N={0} not supported")]
    EvenN(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
