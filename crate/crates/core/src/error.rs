use thiserror::Error;

/// Errors raised by objective construction, engines and validators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element {element} is outside the ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("element {0} is already in the solution")]
    AlreadyInSolution(usize),

    #[error("set is not independent in the constraint system")]
    NotIndependent,

    #[error("degenerate objective: {0}")]
    Degenerate(String),

    #[error("unsupported constraint: {0}")]
    UnsupportedConstraint(String),

    #[error("ground set of size {n} exceeds the limit of {limit} for exhaustive search")]
    TooLarge { n: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
