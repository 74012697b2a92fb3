use thiserror::Error;

/// Errors produced by the geometric pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("flat space form has no quadric")]
    FlatNoQuadric,

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("degenerate induced metric (det = {det:.3e})")]
    DegenerateMetric { det: f64 },

    #[error("not a space-like hypersurface: {0}")]
    NotSpaceLike(String),

    #[error("grid too small for stencil: need at least {need} points per axis, got {got}")]
    StencilTooSmall { need: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("malformed space form string `{input}`: {reason}")]
    SpaceFormString { input: String, reason: String },

    #[error(transparent)]
    Chart(#[from] crate::chartlang::ChartError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
