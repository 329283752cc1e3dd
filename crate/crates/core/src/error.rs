use thiserror::Error;

/// Everything that can go wrong between a metric and its spectrum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FinlapError {
    #[error("zero tangent vector has no vertical derivative")]
    ZeroVector,
    #[error("sphere chart point too close to a pole (phi = {phi})")]
    PoleSingularity { phi: f64 },
    #[error("contact system is singular (condition estimate {condition:e})")]
    SingularContactForm { condition: f64 },
    #[error("Liouville density not positive at (x1 = {x1}, x2 = {x2}, psi = {psi}): h = {h}")]
    NonPositiveDensity { x1: f64, x2: f64, psi: f64, h: f64 },
    #[error("eps = {eps} violates the convexity bound (must stay below {bound})")]
    ConvexityViolation { eps: f64, bound: f64 },
    #[error("Legendre inversion did not converge after {iterations} Newton steps")]
    NewtonDivergence { iterations: usize },
    #[error("invalid Legendre index (l = {l}, m = {m})")]
    InvalidIndex { l: i64, m: i64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix dimensions disagree ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("cannot identify eigenvalue branch (l = {l}, m = {m}) at eps = {eps}")]
    EigenvalueTracking { l: usize, m: usize, eps: f64 },
    #[error("operator does not separate in theta (a12 = {a12:e} at phi = {phi})")]
    NonSeparable { phi: f64, a12: f64 },
    #[error("wrong chart for this operation: {0}")]
    WrongChart(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FinlapError>;

impl From<std::io::Error> for FinlapError {
    fn from(e: std::io::Error) -> Self {
        FinlapError::Io(e.to_string())
    }
}
