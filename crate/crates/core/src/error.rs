use std::io;

use thiserror::Error;

/// Errors produced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for prefix of length {len}")]
    OutOfRange { index: u64, len: u64 },

    #[error("assignment key {0} is not prime")]
    CompositeKey(u64),

    #[error("assignment has no prime with sign -1 (trivial function)")]
    NoNegativePrime,

    #[error("claim does not hold on the prefix: {0}")]
    InvalidClaim(String),

    #[error("root count indeterminate at {precision} bits (root on or too near the circle)")]
    IndeterminateAtPrecision { precision: u32 },

    #[error("unsupported alphabet: {0}")]
    UnsupportedAlphabet(String),

    #[error("corrupt cache: {0}")]
    CorruptCache(String),

    #[error("unsupported cache version {0:#04x}")]
    UnsupportedVersion(u8),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
