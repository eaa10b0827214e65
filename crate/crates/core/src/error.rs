use thiserror::Error;

/// Errors surfaced by the library.
///
/// Structural misuse (dimension mismatches, malformed input files) and
/// infeasible configurations are reported here; numeric preconditions that
/// indicate a programming error (e.g. a non-positive `alpha` passed to a
/// closed-form evaluator) are asserted instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// No observation pair is at least `alpha` apart; carries the largest
    /// separation actually present so callers can pick a feasible `alpha`.
    #[error("no pair of observations at distance >= {alpha} (largest available: {max_distance})")]
    NoQualifyingPair { alpha: f64, max_distance: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
