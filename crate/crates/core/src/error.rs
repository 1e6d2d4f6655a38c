use thiserror::Error;

/// Errors raised by chart, bundle and restricted-Grassmannian operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("subspaces are not complementary: smallest singular value {sigma_min:.3e} of the joint frame is below {tol:.3e}")]
    SplitFailure { sigma_min: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "point lies outside the chart domain: conditioning {conditioning:.3e} below {tol:.3e}"
    )]
    ChartDomainViolation { conditioning: f64, tol: f64 },

    #[error("operation requires an orthogonal (V, V^perp) chart")]
    NotOrthogonal,

    #[error("operands live over different chart points")]
    ChartMismatch,

    #[error("label mismatch in composition: expected `{expected}`, found `{found}`")]
    LabelMismatch { expected: String, found: String },

    #[error("truncation ladder is not coherently embedded: {0}")]
    LadderMismatch(String),

    #[error("invalid decay profile: {0}")]
    BadProfile(String),

    #[error("multiplier factors do not reproduce the tangent fiber map (residual {residual:.3e})")]
    FactorMismatch { residual: f64 },

    #[error("no predual fiber exists for the compact-operator model (p = 0)")]
    PredualUnavailable,

    #[error("invalid Schatten index {0}")]
    InvalidIndex(f64),

    #[error("singular linear system (pivot below threshold)")]
    Singular,

    #[error("exchange format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
