//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A generator specification violates its own parameter constraints
    /// (odd ARX round count, probability outside [0,1], zero-length output, ...).
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    /// A pattern length exceeds the sequence it is applied to, leaving no windows.
    #[error("pattern length {m} leaves no windows in a sequence of {n} bits")]
    EmptyWindow { m: u32, n: u64 },

    /// Profiles or distributions with mismatched pattern lengths were combined.
    #[error("incompatible profiles: {0}")]
    IncompatibleProfile(String),

    /// Fingerprints with different layouts were compared.
    #[error("incompatible fingerprints: {0}")]
    IncompatibleFingerprint(String),

    /// Corpus analyses with mismatched shapes were compared.
    #[error("incompatible analyses: {0}")]
    IncompatibleAnalysis(String),

    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A file is not in the expected format (bad magic, version, or corrupt payload).
    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
