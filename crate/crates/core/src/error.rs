use thiserror::Error;

/// Errors raised by the numerical core and the campaign runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is singular (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("eavesdropper rate list is empty")]
    NoEavesdroppers,

    #[error("cost became non-finite at iteration {iteration}")]
    NonFiniteCost { iteration: usize },

    #[error("precoder column {column} has zero norm after analog precoding")]
    DegeneratePrecoder { column: usize },

    #[error("effective channel is singular, zero-forcing is undefined")]
    SingularEffectiveChannel,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{key}: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },

    #[error("{failed} of {total} trials failed at axis point {axis_index}, above the 1% limit")]
    CampaignFailed {
        axis_index: usize,
        failed: usize,
        total: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            reason: err.to_string(),
        }
    }

    pub(crate) fn dims(
        op: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            op,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
