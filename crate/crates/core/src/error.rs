use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown standard lattice `{0}`")]
    UnknownLattice(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gram matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("gram matrix is empty")]
    EmptyGram,

    #[error("gram matrix is not symmetric: gram[{row}][{col}] = {upper} but gram[{col}][{row}] = {lower}")]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: String,
        lower: String,
    },

    #[error("lattice is not even: diagonal entry gram[{index}][{index}] = {value} is odd")]
    OddDiagonal { index: usize, value: String },

    #[error("gram matrix is degenerate (determinant 0)")]
    Degenerate,

    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("direct sum of an empty list")]
    EmptyDirectSum,

    #[error("invalid finite quadratic form: {0}")]
    InvalidForm(String),

    #[error("group order {order} exceeds the brute-force bound {bound}")]
    BoundExceeded { order: u128, bound: u64 },

    #[error("map is not an isometry: {0}")]
    NotIsometry(String),

    #[error("element list is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("no solution found within bound {bound}")]
    NotFound { bound: i64 },

    #[error("malformed tuple: {0}")]
    MalformedTuple(String),

    #[error("invalid discriminant {0}: {1}")]
    InvalidDiscriminant(i64, &'static str),

    #[error("invalid binary quadratic form ({a}, {b}, {c}): {reason}")]
    InvalidBinaryForm {
        a: i64,
        b: i64,
        c: i64,
        reason: &'static str,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    #[error("{0}")]
    Parse(String),
}
