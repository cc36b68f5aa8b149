use thiserror::Error;

/// Errors raised by the analytic engine, the Fock-space oracle and the sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The mean Stokes vector has no component perpendicular to the axis, so
    /// the squeezing factor is undefined.
    #[error("degenerate axis: {0}")]
    DegenerateAxis(String),

    /// The phase-locked factor diverges where the perpendicular mean vanishes.
    #[error("singular boundary at kt = {kt}: perpendicular mean is zero")]
    SingularBoundary { kt: f64 },

    #[error("truncation error: {0}")]
    TruncationError(String),

    #[error("not converged: drift {drift:.3e} at dim {dim} (max_dim {max_dim})")]
    NonConverged { drift: f64, dim: usize, max_dim: usize },

    #[error("no valid point: {0}")]
    NoValidPoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
