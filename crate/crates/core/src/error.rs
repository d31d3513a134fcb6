//! Error types shared across the crate.

use thiserror::Error;

use crate::diagnostics::Diagnosis;

#[derive(Debug, Error)]
pub enum Error {
    /// A coefficient past the truncation order was required.
    #[error("coefficient at exponent {exponent} is unknown: series truncated at order {truncation}")]
    TruncationExhausted { exponent: i64, truncation: i64 },

    /// Substitution `t^r = z` hit a nonzero coefficient whose exponent is
    /// not a multiple of `r`.
    #[error("exponent {exponent} is not divisible by r = {r}")]
    NonIntegralExponent { exponent: i64, r: u32 },

    #[error("cannot invert a series with no known nonzero term")]
    ZeroInverse,

    #[error("cannot invert an exact series with several terms; truncate it to a finite order first")]
    InverseNeedsTruncation,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),

    #[error("root {0:?} does not belong to the root system")]
    UnknownRoot(Vec<i64>),

    #[error("root system {0} carries no bracket table (only the matrix types sl_n and gl_n do)")]
    NoBracketTable(String),

    #[error("coweight component {index} is {value}, but r*theta must be integral for r = {r}")]
    CoweightNotIntegral { index: usize, value: String, r: u32 },

    #[error("invalid parabolic weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parabolic bundle: {0}")]
    InvalidBundle(String),

    #[error("element lies outside the parahoric algebra\n{0}")]
    NotParahoric(Diagnosis),

    #[error("connection is not equivariant\n{0}")]
    NotEquivariant(Diagnosis),

    #[error("residue condition fails\n{0}")]
    ResidueCondition(Diagnosis),

    #[error("parabolic residue condition fails\n{0}")]
    ParabolicCondition(Diagnosis),

    #[error("unexpected pole: {label} has a term at exponent {exponent}")]
    UnexpectedPole { label: String, exponent: i64 },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("rank {0} is too large for the exhaustive decomposition search (limit 4)")]
    RankTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
