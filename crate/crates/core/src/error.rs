use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised across the crate.
///
/// Verification and search *outcomes* (a failing LS, a block that cannot be
/// refined, a flagged theorem row) are not errors; they are reported through
/// their own result types.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("image array is not a bijection on 1..{degree}")]
    NotBijective { degree: usize },

    #[error("cycle notation: {0}")]
    CycleSyntax(String),

    #[error("{0}")]
    Parse(String),

    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: BigUint, order: BigUint },

    #[error("element is not a member of the group")]
    NotMember,

    #[error("block sizes multiply to {product}, expected {expected}")]
    SizeMismatch { product: BigUint, expected: BigUint },

    #[error("{products} products exceed the exhaustive budget of {budget}; use structural verification")]
    BudgetExceeded { products: BigUint, budget: u64 },

    #[error("block {block} entry {entry} is not a member of the group")]
    NonMemberEntry { block: usize, entry: usize },

    #[error("logarithmic signature carries no level annotations")]
    MissingProvenance,

    #[error("digit {digit} out of range for block {block} of size {size}")]
    DigitOutOfRange { block: usize, digit: usize, size: usize },

    #[error("expected {expected} digits, found {found}")]
    DigitCount { expected: usize, found: usize },

    #[error("group is not solvable")]
    NotSolvable,

    #[error("invalid cyclic set: {0}")]
    InvalidCyclicSet(String),

    #[error("image of the base point not found in the lookup table (corrupted LS)")]
    CorruptedLs,

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("group `{name}` has order {found}, expected {expected}")]
    OrderMismatch {
        name: String,
        expected: BigUint,
        found: BigUint,
    },

    #[error("message {message} out of range for group of order {order}")]
    MessageOutOfRange { message: BigUint, order: BigUint },

    #[error("invalid logarithmic signature: {0}")]
    InvalidLs(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
