use thiserror::Error;

/// Errors raised by the algebraic layers. Check-style operations report
/// failures in their return value instead; these are contract violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is singular; affine map is not invertible")]
    Singular,

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("grading violated: level {level} has xi-degree {degree}")]
    GradingViolation { level: usize, degree: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("cochain contexts differ: {0}")]
    ContextMismatch(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("not a Maurer-Cartan element: residual nonzero at {0}")]
    NotMaurerCartan(String),

    #[error("cochain is not normalized: value at the identity tuple is not 1")]
    NotNormalized,

    #[error("expected a xi-independent, hbar-free cochain: {0}")]
    NotXiIndependent(String),

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
