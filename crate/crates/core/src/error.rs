use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("linear system is underdetermined (rank {rank} < {cols} unknowns)")]
    Underdetermined { rank: usize, cols: usize },
    #[error("radicand {a} is a perfect power ({base}^{exp})")]
    PerfectPowerRadicand { a: u64, base: u64, exp: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operands belong to different algebras")]
    MixedAlgebras,
    #[error("{n1} does not divide {n}")]
    NotADivisor { n: u64, n1: u64 },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("no convergence: precision cap of {cap} bits reached")]
    NonConvergence { cap: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("target is not in the integer span of the term set")]
    NotInSpan,
    #[error("no representation with at most {0} terms")]
    Exhausted(u128),
    #[error("search abandoned after {0} nodes")]
    NodeLimit(u64),
    #[error("no candidate up to {0} verifies")]
    SearchExhausted(u64),
    #[error("invalid tower step: {0}")]
    InvalidStep(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
