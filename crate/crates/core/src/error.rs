use thiserror::Error;

/// Errors produced by the numerical routines and the field-file layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-positive step size {0}")]
    NonPositiveStep(f64),

    #[error("quadrature window too small: edge magnitude {edge:.3e} exceeds {limit:.3e}")]
    WindowTooSmall { edge: f64, limit: f64 },

    #[error("non-Hermitian input: deviation {0:.3e}")]
    NonHermitian(f64),

    #[error("normalization out of tolerance: integral {0}")]
    Normalization(f64),

    #[error("not factorizable: {0}")]
    NotFactorizable(String),

    #[error("degenerate diagonal: max diagonal entry {0:.3e}")]
    DegenerateDiagonal(f64),

    #[error("propagator singular near t=0; identity limit not sampled (t = {0})")]
    PropagatorSingular(f64),

    #[error("chirp undersampled: spacing {spacing:.4e} exceeds bound {bound:.4e}")]
    ChirpUndersampled { spacing: f64, bound: f64 },

    #[error("input not decayed: edge density {0:.3e}")]
    NotDecayed(f64),

    #[error("non-positive residual {0:.3e} at level {1}; stencil saturated")]
    NonPositiveResidual(f64, usize),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("malformed field file: {0}")]
    Malformed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
