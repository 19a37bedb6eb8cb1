use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A standing model assumption does not hold. The message names the inequality.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("numerical failure in {stage}: {detail} (worst residual {worst_residual:.3e})")]
    Numerical {
        stage: String,
        detail: String,
        worst_residual: f64,
    },

    /// The computed solution violates a structural property (e.g. a contact set is not a half-line).
    #[error("structural failure: {0}")]
    Structural(String),
}

impl Error {
    pub(crate) fn numerical(stage: &str, detail: impl Into<String>, worst_residual: f64) -> Self {
        Error::Numerical {
            stage: stage.to_string(),
            detail: detail.into(),
            worst_residual,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
