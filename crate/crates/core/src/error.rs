use finsler_symbolic::ExprError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{tensor}: component {index:?} contradicts the declared {kind} symmetry")]
    SymmetryViolation { tensor: String, index: Vec<usize>, kind: String },
    #[error("invalid symmetry on {tensor}: {reason}")]
    InvalidSymmetry { tensor: String, reason: String },
    #[error("variance mismatch: {0}")]
    VarianceMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("F^2 is not homogeneous of degree 2 in the fiber coordinates")]
    NotHomogeneous,
    #[error("the fundamental tensor is degenerate")]
    DegenerateMetric,
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unsupported object `{0}`")]
    UnsupportedObject(String),
    #[error("{object}: direct and lowered routes disagree at {index:?}")]
    EquivalenceFailure { object: String, index: Vec<usize> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("fundamental tensor is singular at {0}")]
    SingularMetricAt(String),
    #[error("could not draw a valid sample point after {0} attempts")]
    SamplingExhausted(usize),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
