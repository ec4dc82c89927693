//! Error type shared across the crate.

/// Validation and precondition failures.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian: max |A - A†| entry = {deviation:.3e} (tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("matrix is not unitary: max |U†U - I| entry = {deviation:.3e} (tolerance {tolerance:.3e})")]
    NotUnitary { deviation: f64, tolerance: f64 },
    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("not a normalized pure state: norm deviates by {0:.3e}")]
    InvalidPureState(f64),
    #[error("invalid probability table: {0}")]
    InvalidProbabilities(String),
    #[error("channel is not trace preserving: max |sum K†K - I| entry = {0:.3e}")]
    NotTracePreserving(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("negative eigenvalue {0:.3e} below tolerance")]
    NegativeEigenvalue(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<V> = std::result::Result<V, Error>;
