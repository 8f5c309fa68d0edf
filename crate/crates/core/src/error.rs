use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid exponent {0} (must lie in [1, inf])")]
    InvalidExponent(f64),
    #[error("point {point:?} lies outside the box [-{half_width}, {half_width}]^n")]
    OutsideBox { point: Vec<f64>, half_width: f64 },
    #[error("off-grid request: {0}")]
    OffGrid(String),
    #[error("unsupported dimension {0} (only 1 and 2 are supported)")]
    Dimension(usize),
    #[error("support violation: {0}")]
    Support(String),
    #[error("exponent law violated: {0}")]
    ExponentLaw(String),
    #[error("singular map: {0}")]
    Singular(String),
    #[error("invalid weight: {0}")]
    Weight(String),
    #[error("bijection check failed: {0}")]
    Bijection(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("coverage violation: {0}")]
    Coverage(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
