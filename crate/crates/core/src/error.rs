use thiserror::Error;

/// Errors produced by the `specpair` library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid finite set: {0}")]
    InvalidFiniteSet(String),

    #[error("insufficient spectrum: #J = {spectrum} is smaller than #A = {domain}")]
    InsufficientSpectrum { domain: usize, spectrum: usize },

    #[error("symmetry is only defined for basis pairs (got kind {kind}, #A = {domain}, #J = {spectrum})")]
    SymmetryUndefined {
        kind: String,
        domain: usize,
        spectrum: usize,
    },

    #[error("invalid box domain: {0}")]
    InvalidDomain(String),

    #[error("translates by {first:?} and {second:?} overlap in positive measure")]
    Overlap { first: Vec<i64>, second: Vec<i64> },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("duplicate spectrum shift {0} modulo the lattice")]
    DuplicateSpectrum(String),

    #[error("no spectrum points within radius {0}")]
    EmptySpectrum(f64),

    #[error("evaluation matrix is not invertible (condition number {0:e})")]
    NonInvertible(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
