use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid process specification: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported dimension {dim}: density evaluation supports d in {{1, 2, 3}}")]
    UnsupportedDimension { dim: usize },

    #[error("the Levy density is singular at x = 0 (j(x) grows like |x|^-d)")]
    SingularPoint,

    #[error(
        "Fourier inversion is not admissible: t = {t} <= d/alpha = {threshold}; \
         the characteristic function is not integrable, use the Monte Carlo density instead"
    )]
    InversionNotIntegrable { t: f64, threshold: f64 },

    #[error("internal consistency check failed: {what} (relative gap {gap:e})")]
    InternalConsistency { what: String, gap: f64 },

    #[error("solver did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("measure {which} is trivial (total mass {mass:e}); a non-zero measure is required")]
    TrivialMeasure { which: String, mass: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
