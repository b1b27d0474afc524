//! Error type shared by all core operations.

/// Errors produced by validation, argument, and search-budget checks.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An input value violates a documented invariant. The message names
    /// the violated invariant (and field where applicable).
    #[error("validation: {0}")]
    Validation(String),
    /// Sequence or matrix dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A required argument is absent or unusable for the requested operation.
    #[error("argument: {0}")]
    Argument(String),
    /// An exhaustive search would exceed its documented budget. Never a
    /// silent truncation: the operation refuses to run instead.
    #[error("search budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
