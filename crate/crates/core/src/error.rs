use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("invalid index set: {0}")]
    BadIndexSet(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("every form in the tuple is identically zero")]
    AllZeroTuple,

    #[error("block count k = {k} is outside the admissible range {min}..={max}")]
    BadK { k: usize, min: usize, max: usize },

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("point lies in the indeterminacy locus (every coordinate vanishes)")]
    IndeterminacyLocus,

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("computation too large: {0}")]
    TooLarge(String),

    #[error("minor half-size s = {0} is not supported (expected 1 or 2)")]
    BadS(usize),

    #[error("the common factor has degree zero; the parametrization is degenerate")]
    DegenerateFactor,

    #[error("projective point has all coordinates zero")]
    ZeroVector,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks `min <= k <= max`, reporting `BadK` otherwise.
pub(crate) fn check_k(k: usize, min: usize, max: usize) -> Result<()> {
    if k < min || k > max {
        Err(Error::BadK { k, min, max })
    } else {
        Ok(())
    }
}
