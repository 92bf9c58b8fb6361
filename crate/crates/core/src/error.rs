use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("guard syntax error at position {pos}: {msg}")]
    GuardSyntax { pos: usize, msg: String },
    #[error("degree {0} is not in the support")]
    OutOfSupport(i64),
    #[error("bracket `{poly}` uses variables outside {allowed}")]
    BadVariables { poly: String, allowed: String },
    #[error("branches {a} and {b} overlap at (i,j) = ({i},{j}) with different polynomials")]
    Overlap { a: usize, b: usize, i: i64, j: i64 },
    #[error("an unguarded branch must come last")]
    CatchAllNotLast,
    #[error("table entry ({0},{1}) has no skew partner")]
    MissingSkewPartner(i64, i64),
    #[error("parameter domain: {0}")]
    ParamDomain(String),
    #[error("window domain: {0}")]
    WindowDomain(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("`{0}` does not split over the working field")]
    Factorization(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
