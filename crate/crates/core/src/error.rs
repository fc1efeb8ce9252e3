use thiserror::Error;

/// Failures of the polynomial kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("ambient variable count mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
}

/// Malformed parameters or violated preconditions of an identity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("parameter vector has length {got}, expected n + 1 = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 0..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("I must be strictly increasing: {0:?}")]
    INotIncreasing(Vec<usize>),
    #[error("J must be weakly increasing: {0:?}")]
    JNotSorted(Vec<usize>),
    #[error("|I| = {i} but |J| = {j}")]
    SizeMismatch { i: usize, j: usize },
    #[error("I and J overlap at {0}")]
    Overlap(usize),
    #[error("I must be a proper subset of 0..={n}")]
    NotProper { n: usize },
    #[error("the formula needs a nonempty I")]
    EmptyLayer,
    #[error("layer violates the no-interleaving hypothesis (j_t < i_s < j_u < i_t for s < t < u = {0:?})")]
    NpcViolation((usize, usize, usize)),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
