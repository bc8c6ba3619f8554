use thiserror::Error;

use crate::model::ValidationReport;

/// Errors raised by the solver, generator and benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("invalid plan for {case}: {report}")]
    InvalidPlan {
        case: String,
        report: ValidationReport,
    },

    #[error("height profile has no positive entry")]
    EmptyProfile,

    #[error("demand matrix is already satisfied")]
    NothingToCut,

    #[error("construction stalled; stuck demand entries (figure, fabric, remaining): {stuck:?}")]
    Stall { stuck: Vec<(usize, usize, i64)> },

    #[error("empty range: lo {lo} > hi {hi}")]
    EmptyRange { lo: i64, hi: i64 },

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("no results for group `{0}`")]
    EmptyGroup(String),

    #[error("case count must be at least 1")]
    NoCases,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
