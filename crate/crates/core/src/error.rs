use thiserror::Error;

/// Errors produced anywhere in the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular (zero pivot in column {pivot})")]
    Singular { pivot: usize },

    #[error("system is ill-conditioned (1-norm condition estimate {estimate:.3e})")]
    IllConditioned { estimate: f64 },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("quadrature failed to converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("radius {r} lies beyond the tabulated range [0, {r_max}]")]
    Extrapolation { r: f64, r_max: f64 },

    #[error("no sign change found for |u| <= {limit} at point ({x}, {y})")]
    RootBracketing { x: f64, y: f64, limit: f64 },

    #[error("iteration did not converge after {iterations} steps (last change {last:.3e})")]
    Convergence { iterations: usize, last: f64, history: Vec<f64> },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("case {case}: {source}")]
    Case { case: String, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures caused by the numerics (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        if let Error::Case { source, .. } = self {
            return source.is_numeric();
        }
        matches!(
            self,
            Error::Singular { .. }
                | Error::IllConditioned { .. }
                | Error::Quadrature { .. }
                | Error::Extrapolation { .. }
                | Error::RootBracketing { .. }
                | Error::Convergence { .. }
                | Error::Range(_)
                | Error::InsufficientData(_)
        )
    }
}
