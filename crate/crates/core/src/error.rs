use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{param}`: {reason}")]
    InvalidParams { param: String, reason: String },

    #[error("grid too coarse on axis {axis}: need at least {needed} points, got {got}")]
    GridTooCoarse { axis: usize, needed: usize, got: usize },

    #[error("function is not mean-zero along axis {axis} (coefficient with k_{axis} = 0 present)")]
    NotRingMember { axis: usize },

    #[error("degree {degree} on axis {axis} exceeds the cap {cap}")]
    DegreeTooLarge { axis: usize, degree: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("certified truncation tail {tail:.3e} exceeds 1% of the partial value {partial:.3e} (nu_max = {nu_max})")]
    TailNotConverged { tail: f64, partial: f64, nu_max: usize },

    #[error("series verdict inconclusive at truncation {truncation}: {detail}")]
    Inconclusive { truncation: usize, detail: String },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("parameters not covered by the embedding case table: {0}")]
    UncoveredParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(param: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            param: param.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
