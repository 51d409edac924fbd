use alloc::string::String;

/// Failure modes shared by every computation in the crate.
///
/// Variants split into two families: domain errors (a precondition of the
/// requested computation does not hold) and [`Error::Integrality`], which
/// only fires when an exact identity that must hold has failed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residual characteristic 2 is not supported")]
    EvenPrime,
    #[error("extension degree must be at least 1")]
    DegreeTooSmall,
    #[error("field of size {0} exceeds the supported cap")]
    FieldTooLarge(u64),
    #[error("operands belong to different fields")]
    ParentMismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("zero input where a unit is required")]
    ZeroInput,
    #[error("{0} does not divide {1}")]
    NotDivisor(u32, u32),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("element is not orthogonal for the given form")]
    NotOrthogonal,
    #[error("element is not semisimple")]
    NotSemisimple,
    #[error("vectors are linearly dependent")]
    DependentBasis,
    #[error("forms have different invariants; no congruence exists")]
    InvariantMismatch,
    #[error("precision must be at least 1")]
    Precision,
    #[error("character is not regular")]
    NotRegular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("exact identity failed (implementation bug): {0}")]
    Integrality(String),
}

impl Error {
    /// True for the failures that signal a broken identity rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Integrality(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;
