use thiserror::Error;

/// Errors produced by the qudit constructions and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "qudit dimension must be at least 2, got {dim}"
        )));
    }
    Ok(())
}

pub(crate) fn check_probability(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange(format!(
            "{name} must lie in [0, 1], got {value}"
        )));
    }
    Ok(())
}
