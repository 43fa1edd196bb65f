use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDim { dim: usize, reason: &'static str },
    #[error("no forms")]
    NoForms,
    #[error("degenerate plane: |x∧y| = {0:e}")]
    DegeneratePlane(f64),
    #[error("matrix is not orthogonal (‖q·qᵀ − I‖ = {0:e})")]
    NotOrthogonal(f64),
    #[error("tensor violates the first Bianchi identity (relative residual {0:e})")]
    BianchiViolation(f64),
    #[error("Thorpe test is dimension-4 only")]
    ThorpeDimension,
    #[error("degenerate simplex {id} (volume {volume:e})")]
    DegenerateSimplex { id: usize, volume: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("ill-conditioned polynomial fit (condition number {0:e}); try different radii")]
    IllConditioned(f64),
    #[error("infeasible twist parameters: {0}")]
    InfeasibleTwist(String),
    #[error("unsupported frame: {0}")]
    UnsupportedFrame(String),
    #[error("finite differences dominated by noise: {0}")]
    NoiseDominated(String),
    #[error("degenerate convex hull: {0}")]
    DegenerateHull(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
