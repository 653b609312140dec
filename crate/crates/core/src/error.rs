use thiserror::Error;

use crate::scalar::FieldDescriptor;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("invalid scalar {text:?}: {reason}")]
    ParseScalar { text: String, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("subspace is not invariant under the matrix")]
    NotInvariant,
    #[error("cannot spin the zero vector")]
    ZeroVector,
    #[error("closure was truncated at {cap} elements")]
    TruncatedClosure { cap: usize },
    #[error("enumeration needs {needed} subspaces, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("generator {index} is not nilpotent")]
    NotNilpotent { index: usize },
    #[error("no triangularizing flag found: {0}")]
    NoFlag(String),
    #[error("flag does not triangularize the generators")]
    FlagInvalid,
    #[error("bad instance spec: {0}")]
    BadSpec(String),
    #[error("matrix is numerically singular")]
    SingularInput,
    #[error("averaged Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("normalized closure exceeded cap {cap}")]
    ClosureNotFinite { cap: usize },
    #[error("generator {index} has spectrum off every circle (deviation {deviation:e})")]
    NotOnCircle { index: usize, deviation: f64 },
    #[error("empty generator list")]
    NoGenerators,
}
