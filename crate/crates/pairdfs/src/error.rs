use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector dimensions do not conform.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An input value violates a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A numerical contract was violated (e.g. a matrix that must be
    /// Hermitian is not, within tolerance).
    #[error("numerical contract violation: {0}")]
    Contract(String),

    /// A code space could not be constructed because a pair operator does
    /// not have the required 2-dimensional null space.
    #[error(
        "code construction failed: pair ({low}, {high}) has kernel dimension {kernel_dim}, expected 2"
    )]
    CodeConstruction {
        low: usize,
        high: usize,
        kernel_dim: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
