use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown catalog id `{id}` (known ids: {known})")]
    CatalogMiss { id: String, known: String },

    /// An exponential term would overflow double precision. Callers that
    /// iterate treat the point as escaped.
    #[error("exp overflow guard exceeded at z = {z}")]
    Overflow { z: Complex64 },

    #[error("pole proximity at z = {z}")]
    Pole { z: Complex64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inverse branch failure at w = {w}: {reason}")]
    BranchFailure { w: Complex64, reason: String },

    #[error("Newton iteration did not converge after {steps} steps (residual {residual:e})")]
    NonConvergence { steps: usize, residual: f64 },

    /// Path lifting could not continue; `segment` and `t` locate the
    /// blocking parameter along the input polyline.
    #[error("path-lift obstruction on segment {segment} at t = {t}: {reason}")]
    Obstruction {
        segment: usize,
        t: f64,
        reason: String,
    },

    #[error("boundary gap undecidable within {budget} probes; increase the probe budget")]
    UndecidableGap { budget: usize },

    #[error("IFS precondition failed: {0}")]
    Containment(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
