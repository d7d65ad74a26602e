use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group too large: closure exceeded cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("cap exceeded: {what} is {value}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("index {index} out of range for size {size}")]
    OutOfRange { index: usize, size: usize },

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),

    #[error("permutation does not fix the identity point {point}")]
    DoesNotFixIdentity { point: usize },

    #[error("element is not in the extension group: {0}")]
    NotInGroup(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("vector norm {norm:e} too small")]
    NearZero { norm: f64 },

    #[error("dimension {n} too small, need at least {min}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
