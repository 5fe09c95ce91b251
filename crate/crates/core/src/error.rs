use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension n={n}: {reason}")]
    InvalidDimension { n: usize, reason: &'static str },

    #[error("unsupported dimension n={n}: requires {requirement}")]
    UnsupportedDimension { n: usize, requirement: &'static str },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("frame mismatch: operands live on Λ²ℝ^{left} and Λ²ℝ^{right}")]
    FrameMismatch { left: usize, right: usize },

    #[error("malformed tensor: {0}")]
    MalformedTensor(String),

    #[error("matrix is not symmetric (max deviation {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not orthogonal (|OᵀO - 1| = {defect:.3e})")]
    InvalidRotation { defect: f64 },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("|Ric|²/S² is undefined when the scalar curvature vanishes")]
    UndefinedRatio,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
