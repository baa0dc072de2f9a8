use thiserror::Error;

/// Errors raised by state construction, the swap engine and the router.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("state cannot be normalized (zero or non-finite amplitudes)")]
    NotNormalizable,

    #[error("non-physical density matrix: {0}")]
    NonPhysical(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("impossible outcome: probability {probability} is below the resolution floor")]
    ImpossibleOutcome { probability: f64 },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("no path with non-zero concurrence from `{from}` to `{to}`")]
    Unreachable { from: String, to: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
