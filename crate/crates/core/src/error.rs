use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("partition sizes differ: |lambda| = {lambda}, |mu| = {mu}")]
    SizeMismatch { lambda: usize, mu: usize },

    #[error("cannot invert a series with no known nonzero coefficient")]
    ZeroInverse,

    #[error("series precondition violated: {0}")]
    Domain(String),

    #[error("insufficient precision: needed order {needed}, have {have}")]
    Precision { needed: i64, have: i64 },

    #[error("odd power of u appeared where only even powers are allowed (exponent {exponent})")]
    Parity { exponent: i64 },

    #[error("missing value for position subset {0:#b}")]
    MissingSubset(u32),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("underdetermined system: {0}")]
    Underdetermined(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}
