//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular or numerically rank-deficient: {0}")]
    SingularInput(String),

    #[error("matrix is not symmetric within tolerance (residual {residual:e})")]
    SymmetryViolation { residual: f64 },

    #[error("kernel dimension mismatch: expected {expected}, found {found} (complex embedding)")]
    KernelDimension { expected: usize, found: usize },

    #[error("rank check failed: {0}")]
    RankCheck(String),

    #[error("invalid ADHM data: {0}")]
    InvalidData(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("numeric rank decision is indeterminate: {0}")]
    Indeterminate(String),

    #[error("certificate does not satisfy the symmetry equations (residual {residual:e})")]
    InvalidCertificate { residual: f64 },

    #[error("induced generators fail sp(n) membership (residual {residual:e})")]
    InducedRepFailure { residual: f64 },

    #[error("orbit does not close at the requested period (gap {gap:e})")]
    NonClosingOrbit { gap: f64 },

    #[error("gauge alignment failed: {0}")]
    AlignmentFailure(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("unsupported tensor shape: {0}")]
    UnsupportedShape(String),
}
