use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("grade {grade} out of range for n = {n}")]
    GradeOutOfRange { grade: usize, n: usize },

    #[error("unsupported dimension n = {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("lattice mismatch: expected {expected}, found {found}")]
    LatticeMismatch { expected: String, found: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("B = 0 has no chirp kernel; use the B = 0 branch of clct_forward")]
    DegenerateB,

    #[error("B = 0 branch needs D to map the lattice onto itself (got D = {0})")]
    ResamplingUnsupported(f64),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("window integral vanishes: {0}")]
    ZeroIntegral(String),

    #[error("window is not normalized to unit integral (integral = {0})")]
    NotNormalized(f64),

    #[error("transformed evaluation needs an analytic window")]
    AnalyticWindowRequired,

    #[error("scaling vector has a zero component: {0:?}")]
    ZeroScale(Vec<f64>),

    #[error("empty (u, theta) quadrature set")]
    EmptyQuadrature,

    #[error("admissibility constant must be positive (got {0})")]
    NonPositiveAdmissibility(f64),

    #[error("u list does not cover the frequency lattice: {0}")]
    MissingCoverage(String),

    #[error("{0} is not a lattice-compatible operation")]
    NonLattice(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
