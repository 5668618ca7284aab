use thiserror::Error;

pub type Result<T> = std::result::Result<T, CdeError>;

/// Failure modes across the crate. `Dimension`/`Unsupported`/`Invalid` are
/// caller errors; `Numerical` means an algorithm ran out of road (stepsize
/// underflow, root polish divergence, ...) on otherwise valid input.
#[derive(Debug, Error)]
pub enum CdeError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported for this family: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CdeError {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CdeError::Numerical(_) => 3,
            _ => 2,
        }
    }
}
