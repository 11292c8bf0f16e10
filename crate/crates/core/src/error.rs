use thiserror::Error;

/// Errors raised by the library.
///
/// Validation failures (bad parameters, undersized spaces) are kept apart from
/// numerical failures (truncation, non-convergence) so that callers such as the
/// CLI can map them onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension {dim} too small: need at least {needed}")]
    DimensionTooSmall { dim: usize, needed: usize },

    #[error("truncation too small: tail mass {tail:.3e} exceeds {limit:.1e}")]
    TruncationTooSmall { tail: f64, limit: f64 },

    #[error("matrix exponential did not converge (unitarity defect {defect:.3e})")]
    NonConvergence { defect: f64 },

    #[error("insufficient Fock headroom: {0}")]
    InsufficientHeadroom(String),

    #[error("at grid point (x = {x}, y = {y}): {source}")]
    AtGridPoint {
        x: f64,
        y: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// `true` for errors caused by the caller's inputs rather than by numerics
    /// or the environment.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidParameter(_) | Error::DimensionTooSmall { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
