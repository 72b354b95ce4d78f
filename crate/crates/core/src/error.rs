use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature failed to reach tolerance: estimate {value:.3e}, error {error:.3e} after {subdivisions} subdivisions"
    )]
    QuadratureFailure {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("non-physical state: {0}")]
    NonPhysicalState(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("basis optimizer failed: {0}")]
    OptimizerFailure(String),

    #[error("field grid spacing {spacing} exceeds the allowed maximum {max}")]
    InsufficientResolution { spacing: f64, max: f64 },

    #[error("no time in the grid shows entanglement revival")]
    NoRevivalInGrid,

    #[error("scaling parameter must be positive, got {0}")]
    NonpositiveScale(f64),

    /// A pipeline failure tagged with the grid point that produced it.
    #[error("at gamma={gamma}, t={t_tilde}, a={a_tilde}: {source}")]
    AtGridPoint {
        gamma: f64,
        t_tilde: f64,
        a_tilde: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any grid-point context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtGridPoint { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::QuadratureFailure { .. }
                | Error::NonPhysicalState(_)
                | Error::OptimizerFailure(_)
        )
    }
}
