use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("cone mismatch: operands live over different ordering cones")]
    ConeMismatch,
    #[error("illegal infinity sum: (+inf) + (-inf) is undefined")]
    IllegalInfinitySum,
    #[error("empty feasible set: no x in C with G(x) in -S")]
    EmptyFeasibleSet,
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("operator is not positive: T(S) is not contained in K")]
    NotPositive,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("property violated: {0}")]
    Violation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { context, expected, got })
    }
}
