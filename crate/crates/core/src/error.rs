use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

/// Failure modes shared by every operation in the crate.
///
/// Variants split into precondition failures (bad input, wrong signature,
/// lines outside the negative cone) and [`Error::Invariant`], which only
/// fires when an internal consistency check fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("empty form: rank must be at least 1")]
    EmptyForm,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("expected {expected} entries, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form is degenerate (determinant 0)")]
    Degenerate,
    #[error("form is definite; indefinite unimodular classification does not apply")]
    DefiniteForm,
    #[error("form is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("even unimodular form has signature {signature}, not divisible by 8")]
    IntegralityViolation { signature: i64 },
    #[error("form is odd; expected an even form")]
    OddForm,
    #[error("signature {signature} is positive; negate the form first")]
    PositiveSignature { signature: i64 },
    #[error("unsupported signature (b+ = {b_plus}, b- = {b_minus}); need b+ = 1 or b- = 1")]
    UnsupportedSignature { b_plus: usize, b_minus: usize },
    #[error("rank {rank} is too small for this operation (need at least {min})")]
    RankTooSmall { rank: usize, min: usize },
    #[error("line has non-negative square {square}; a negative line is required")]
    NonNegativeLine { square: String },
    #[error("zero vector does not define a line")]
    ZeroVector,
    #[error("null vector: orthogonal complement is degenerate")]
    DegenerateComplement,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("empty lattice (rank 0)")]
    EmptyLattice,
    #[error("coefficient bound {given} is below the guaranteed search box {required}")]
    InsufficientBound { given: u32, required: BigInt },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("universal bound violated: confsys^2 = {value_sq} >= 2/3 * {rank} on line {line:?}")]
    BoundViolation {
        line: Vec<BigInt>,
        value_sq: String,
        rank: usize,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;
