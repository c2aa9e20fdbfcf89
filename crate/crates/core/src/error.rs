use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has a non-finite coordinate at position {position}")]
    NonFinite { position: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid polygon norm: {0}")]
    InvalidPolygon(String),

    #[error("input vector {index} has norm {norm} which exceeds the unit ball (tolerance {tol})")]
    InputTooLong { index: usize, norm: f64, tol: f64 },

    #[error("{what}: {size} elements exceeds the enumeration cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("index {index} is not after the last consumed index {last}")]
    IndexOrder { index: usize, last: usize },

    #[error("delta must be a positive finite number, got {0}")]
    InvalidDelta(f64),

    #[error("no unit vector v satisfies |x + v| = {target} for |x| = {x_norm}")]
    UnsolvableGeometry { x_norm: f64, target: f64 },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("construction invariant violated: {0}")]
    InvariantViolated(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
