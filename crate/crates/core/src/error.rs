//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("closure exceeded cap of {cap} elements (non-finite or wrong generators)")]
    ClosureCap { cap: usize },

    #[error("unknown group case `{0}`")]
    UnknownCase(String),

    #[error("parameter m={0} out of range (3..=12)")]
    BadParameter(u32),

    #[error("catalog validation failed: {0}")]
    Validation(String),

    #[error("character table: {0}")]
    CharacterTable(String),

    #[error("fixed-locus check failed: {0}")]
    FixedLocus(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
