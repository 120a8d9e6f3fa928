//! Error taxonomy shared across the crate.

/// Errors produced by library operations.
///
/// The CLI maps these onto exit codes: [`Error::NumericRange`] exits with 2,
/// everything else with 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An element was used with a group it does not belong to.
    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    /// Integer overflow or an exact rational grew past the configured bit cap.
    #[error("numeric range: {0}")]
    NumericRange(String),

    /// The input is outside the domain of the operation (empty support,
    /// window too short, horizon too small, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// A documented precondition was not met.
    #[error("precondition: {0}")]
    Precondition(String),

    /// A value escaped the invariants its type declares (e.g. a weight
    /// outside its declared bounds).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// Bad experiment configuration.
    #[error("config: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericRange(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
