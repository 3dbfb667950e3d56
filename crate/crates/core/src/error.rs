use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("momentum distribution is not defined for {0} states")]
    MomentumUndefined(&'static str),

    /// Subdivision or expansion budget exhausted. Carries the best estimate.
    #[error("tolerance not met: best estimate {value:e} with error estimate {err_est:e}")]
    ToleranceNotMet { value: f64, err_est: f64 },

    /// Two independent computations of the same quantity disagree, or a
    /// theorem-backed relation failed for a physical state.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("no false violation found up to widths {max_delta_x:e} x {max_delta_p:e}")]
    SearchExhausted { max_delta_x: f64, max_delta_p: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
