use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit {0} outside supported range [2, 2^40]")]
    LimitOutOfRange(u64),

    #[error("argument {value} exceeds the prime table limit {limit}")]
    BeyondTable { value: f64, limit: u64 },

    #[error("argument t = {0} is below 2")]
    BelowTwo(f64),

    #[error("invalid progression: q = {q}, a = {a} ({reason})")]
    InvalidTarget { q: u64, a: u64, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("L(1, chi) is requested for the principal character (pole at s = 1)")]
    PrincipalCharacter,

    #[error("argument tracking of L(s, chi) failed near sigma = {sigma}: step fell below 2^-20")]
    BranchTracking { sigma: f64 },

    #[error("imaginary residue {residue:e} in log L(q, a) exceeds tolerance {tolerance:e}")]
    BranchResidue { residue: f64, tolerance: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("correction cutoff P = {cutoff} is below modulus {q}")]
    CutoffBelowModulus { cutoff: u64, q: u64 },

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("discriminant {0} is not in the class-number table")]
    NotInTable(i64),

    #[error("corrupt sieve cache {path}: {reason} (rebuild required)")]
    CorruptCache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
