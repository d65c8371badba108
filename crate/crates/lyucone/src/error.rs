//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different ring contexts")]
    ContextMismatch,

    #[error("column {col} is not in the image of the map")]
    NotInImage { col: usize },

    #[error("cell index ({i}, {j}) outside [0, {max}]")]
    IndexOutOfRange { i: i64, j: i64, max: i64 },

    #[error("ideal is the unit ideal")]
    ImproperIdeal,

    #[error("the projective scheme is empty (dim R/I = 0)")]
    EmptyScheme,

    #[error("inputs do not present the same scheme: d = {left} vs d = {right}")]
    DimensionMismatch { left: i64, right: i64 },

    #[error("oracle requires a monomial ideal; generator {index} has {terms} terms")]
    NonMonomialInput { index: usize, terms: usize },

    #[error("oracle did not stabilize within the degree-window cap")]
    OracleInconclusive,

    #[error("resource cap exceeded: {what}")]
    ResourceCap { what: String },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("generator {index} is not homogeneous")]
    NonHomogeneous { index: usize },

    #[error("{p} is not prime")]
    NonPrimeField { p: u64 },

    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
