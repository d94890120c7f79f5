use thiserror::Error;

/// Failure modes of the library.
///
/// Variants split into input errors (malformed data, exit code 1 at the CLI)
/// and domain errors (well-formed data outside the regime where distillation
/// is defined, exit code 2).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Kraus operators violate completeness (deviation {0:e})")]
    Incomplete(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("single-Kraus channel, distillation not needed")]
    SingleKraus,

    #[error("entanglement fully destroyed (p = {0} >= 1)")]
    FullyDestroyed(f64),

    #[error("non-distillable state (fidelity {0} <= 1/2)")]
    NonDistillable(f64),

    #[error("not a TKO-channel state: {0}")]
    NotTkoState(String),

    #[error("threshold not reached: {0}")]
    NotReached(String),

    #[error("degenerate outcome: {0}")]
    Degenerate(String),

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by well-formed inputs that lie outside the
    /// distillable regime.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::SingleKraus
                | Error::FullyDestroyed(_)
                | Error::NonDistillable(_)
                | Error::NotTkoState(_)
                | Error::NotReached(_)
                | Error::Degenerate(_)
        )
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension_mismatch",
            Error::NotHermitian(_) => "not_hermitian",
            Error::NotNormalized(_) => "not_normalized",
            Error::InvalidDensity(_) => "invalid_density",
            Error::Incomplete(_) => "incomplete_kraus",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Unsupported(_) => "unsupported",
            Error::SingleKraus => "single_kraus",
            Error::FullyDestroyed(_) => "fully_destroyed",
            Error::NonDistillable(_) => "non_distillable",
            Error::NotTkoState(_) => "not_tko_state",
            Error::NotReached(_) => "not_reached",
            Error::Degenerate(_) => "degenerate",
            Error::Io(_) => "io",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
