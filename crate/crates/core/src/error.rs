use thiserror::Error;

/// Library-wide error type.
///
/// `DensityTooLow` and `NotAFrame` report mathematical preconditions that no
/// input massaging can repair; every other variant is an argument or shape
/// problem. Callers that need to distinguish the two classes (the CLI maps
/// them to different exit codes) can match on the variant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tensor rank {0} outside the supported range 1..=4")]
    RankOutOfRange(usize),
    #[error("axis {axis} has extent 0; empty axes are not allowed")]
    EmptyAxis { axis: usize },
    #[error("entry count {got} does not match the shape product {expected}")]
    EntryCount { expected: usize, got: usize },
    #[error("non-finite entry at linear index {0}")]
    NonFinite(usize),
    #[error("exponent {0} is not in [1, inf]")]
    BadExponent(f64),
    #[error("exponent vector has length {got}, tensor has rank {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("axis map {0:?} is not a permutation of 0..{1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: Vec<usize>, got: Vec<usize> },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("window has zero norm")]
    ZeroWindow,
    #[error("lattice step {step} does not divide N = {n}")]
    NonDivisorStep { step: usize, n: usize },
    #[error("lattice too sparse: a*b = {ab} exceeds N = {n}, so no frame exists")]
    DensityTooLow { ab: usize, n: usize },
    #[error("not a frame: lower bound {lower:.6e} is below threshold relative to upper bound {upper:.6e}")]
    NotAFrame { lower: f64, upper: f64 },
    #[error("iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("matrix with {got} columns exceeds the enumeration cap of {cap}")]
    TooLarge { cap: usize, got: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
}

pub type Result<T> = std::result::Result<T, Error>;
