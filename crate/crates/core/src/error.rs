//! Error type shared by the engine modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpError {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("linear map is not invertible")]
    NonInvertible,
    #[error("expected a univariate polynomial in one even variable")]
    Multivariate,
    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("argument is not homogeneous in parity")]
    InhomogeneousArgument,
    #[error("multiderivation is not homogeneous in exterior degree")]
    MixedExteriorDegree,
    #[error("expected an odd element (total Z2 degree)")]
    NotOdd,
    #[error("expected an even element (total Z2 degree)")]
    NotEven,
    #[error("0-cochain terms are not allowed here")]
    ZeroCochainTerm,
    #[error("higher automorphism generator has terms with fewer than two derivations")]
    LowOrderGenerator,
    #[error("codifferential is not internally homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polynomial is zero")]
    ZeroInput,
}

pub type Result<T> = std::result::Result<T, GpError>;
