use alloc::string::String;

/// Errors raised by the uncertainty toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Operand dimensions do not match.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A numerical check failed (non-real trace, negative variance, solver breakdown, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Invalid caller input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A Fock truncation is too small to hold the requested state.
    #[error("truncation too small: tail weight {tail_weight:e} beyond index {cutoff} (basis size {n_max})")]
    Truncation {
        tail_weight: f64,
        cutoff: usize,
        n_max: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
