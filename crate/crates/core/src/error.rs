use thiserror::Error;

/// Errors raised by the spectral, pencil and harness computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigensolve did not converge (residual {residual:.3e} above tolerance {tolerance:.3e})")]
    NonConvergence { residual: f64, tolerance: f64 },

    #[error("singular formula: {0}")]
    Singular(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no sign change of phi(t) - (n-1)(2t+n-2) found; sampled values: {samples:?}")]
    NoBracket { samples: Vec<(f64, f64)> },

    #[error("quadrature did not converge: relative change {change:.3e}")]
    Quadrature { change: f64 },

    #[error("band overlap count {count} exceeds 5 at radius {radius:.6e}")]
    Overlap { count: usize, radius: f64 },
}

impl ConeError {
    /// Short name of the module that raised the error, used for CLI provenance.
    pub fn provenance(&self) -> &'static str {
        match self {
            ConeError::Domain(_) | ConeError::NonConvergence { .. } => "sphere_spectra",
            ConeError::NoBracket { .. } | ConeError::Singular(_) => "pencil",
            ConeError::Quadrature { .. } | ConeError::Overlap { .. } => "dirichlet_harness",
            ConeError::Precondition(_) | ConeError::Numerical(_) => "core",
        }
    }
}

pub type Result<T> = std::result::Result<T, ConeError>;
