//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An input value or combination of values is outside the accepted
    /// domain. The message names the offending value.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The search produced a non-finite brightness and cannot continue.
    #[error("non-finite brightness encountered at generation {generation}")]
    NumericFailure { generation: usize },

    /// The brute-force oracle only handles very small arrays.
    #[error("brute-force search supports at most {max} antennas, got {got}")]
    UnsupportedArraySize { got: usize, max: usize },

    /// No point of the oracle grid satisfies every constraint.
    #[error("no feasible grid point under the requested discretization")]
    NoFeasibleGridPoint,

    /// The oracle grid would require more evaluations than the caller allows.
    #[error("grid holds {cardinality} candidates, above the cap of {cap}")]
    GridTooLarge { cardinality: u128, cap: u128 },

    /// Any failure while reading or writing a named file; `source` is the
    /// underlying error.
    #[error("{path}: {source}")]
    File { path: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
