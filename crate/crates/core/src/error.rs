use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular (determinant 0)")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quotient dimension {found} in degree {degree} differs from Hilbert coefficient {expected}; input is not smooth")]
    QuotientDimension {
        degree: i64,
        expected: u64,
        found: u64,
    },

    #[error("weights are not invariant: row weights are not all congruent modulo {modulus}")]
    NotInvariant { modulus: u64 },

    #[error("permutation is not a symmetry of the matrix")]
    NotASymmetry,

    #[error("permutation does not normalize the weight class")]
    NotNormalizing,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unknown rule id `{0}` (expected R1..R8)")]
    UnknownRule(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("value does not fit in a machine integer: {0}")]
    Overflow(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
