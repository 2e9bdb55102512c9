//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spec parse error at byte {pos}: {msg}")]
    SpecParse { pos: usize, msg: String },

    #[error("modulus {0} is not a valid cyclic factor (entries must be 0 or >= 2)")]
    BadModulus(u64),

    #[error("coordinate vector has length {got}, expected {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("operation requires a finite group, but {0} has an infinite factor")]
    InfiniteGroup(String),

    #[error("operands live in different groups: {0} vs {1}")]
    SpecMismatch(String, String),

    #[error("rank {0} out of range for a group of order {1}")]
    RankOutOfRange(u64, u64),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not injective")]
    NotInjective,

    #[error("map was not produced by the required construction")]
    WrongConstruction,

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
