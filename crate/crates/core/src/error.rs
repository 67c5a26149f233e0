//! Error type shared by every module in the crate.

use crate::Int;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Checked integer arithmetic overflowed. The payload names the operation.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid discriminant {0}: need D < 0 and D ≡ 0, 1 (mod 4)")]
    InvalidDiscriminant(Int),

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(Int, Int),

    #[error("form ({0}, {1}, {2}) is not positive definite")]
    NotPositiveDefinite(Int, Int, Int),

    #[error("gram matrix is not positive definite")]
    GramNotPositiveDefinite,

    #[error("form ({0}, {1}, {2}) is not primitive")]
    NotPrimitive(Int, Int, Int),

    #[error("{0} is not prime")]
    NotPrime(Int),

    /// A split prime was required; `found` is the number of norm-divisible
    /// index-p sublattices that actually exist (0 inert, 1 ramified).
    #[error("prime {p} is not split for discriminant {d}: found {found} sublattices with norm in p·𝔫")]
    NotSplit { d: Int, p: Int, found: usize },

    #[error("scaling produces a gram matrix that is not half-integral")]
    NonIntegralScale,

    #[error("rank {0} is not supported here")]
    RankUnsupported(usize),

    #[error("gcd({n}, {d}) must be 1")]
    NotCoprime { n: Int, d: Int },

    #[error("{n} is represented by the class, so the query does not apply")]
    AlreadyRepresented { n: Int },

    #[error("matrix does not have full column rank")]
    RankDeficient,

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
