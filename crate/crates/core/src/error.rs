use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative valuation {0}: no residue")]
    NegativeValuation(i64),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("entry {row},{col} has negative valuation")]
    IntegralityViolation { row: usize, col: usize },
    #[error("sections differ: {0} vs {1}")]
    SectionMismatch(String, String),
    #[error("determinant is not a unit")]
    NotAUnit,
    #[error("degenerate generalized isomorphism: section {0} is identically zero")]
    UnsupportedDegenerate(String),
    #[error("zero pivot at step {0}")]
    ZeroPivot(usize),
    #[error("pair is not admissible: leading minor at step {0} is not a unit")]
    NotAdmissible(usize),
    #[error("invalid stratum data: {0}")]
    InvalidStratumData(String),
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
    #[error("vanishing pattern does not match: {0}")]
    TypeMismatch(String),
    #[error("stacked map has rank {rank} < {n} at the closed point")]
    NotASubbundle { rank: usize, n: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
