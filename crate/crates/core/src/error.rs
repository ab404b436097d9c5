use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet must contain at least one generator")]
    EmptyAlphabet,

    #[error("enumeration of {count} words exceeds the budget of {cap}")]
    EnumerationBudget { count: String, cap: u64 },

    #[error("generator index {index} out of range for an alphabet of size {m}")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("word contains a non-affine generator at position {position}")]
    NotAffine { position: usize },

    #[error("exact path requires linear expanding or rotation generators only")]
    ExactUnavailable,

    #[error("Birkhoff sum over the empty word is undefined")]
    EmptyWord,

    #[error("epsilon {epsilon} outside the exact domain (must be below {limit})")]
    ApproximationDomain { epsilon: f64, limit: f64 },

    #[error("grid resolution {resolution} too coarse: at least {required} points required")]
    GridTooCoarse { resolution: usize, required: f64 },

    #[error("grid saturated: {count} of {points} grid points admitted")]
    GridSaturated { count: usize, points: usize },

    #[error("affine form is not pure-expanding (largest prefix expansion is not the last); use the grid path")]
    NotPureExpanding,

    #[error("expansion factor overflowed 128 bits")]
    ExpansionOverflow,

    #[error("potential has no Hölder metadata")]
    MissingHolder,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
