use thiserror::Error;

/// Errors raised across the geometry, construction and probe layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter {param} outside segment range [{lo}, {hi}]")]
    ParameterOutOfRange { param: f64, lo: f64, hi: f64 },

    #[error("parallel curvature undefined on the axis at parameter {param}")]
    AxisSingularity { param: f64 },

    #[error("adaptive quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("invalid segment: {0}")]
    InvalidSegment(String),

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("junction {index}: {reason}")]
    Junction { index: usize, reason: String },

    #[error("surface is not confined to the unit ball (max radius {max_radius})")]
    NotConfined { max_radius: f64 },

    #[error("surface is not closed: {0}")]
    NotClosed(String),

    #[error("Newton solve failed at r = {r}: {reason} (last iterate r1 = {r1}, beta = {beta})")]
    SolverFailure {
        r: f64,
        r1: f64,
        beta: f64,
        reason: String,
    },

    #[error("solution outside admissible domain: {0}")]
    Domain(String),

    #[error("bump amplitude {t} not admissible: {reason}")]
    Amplitude { t: f64, reason: String },

    #[error("target out of range: {0}")]
    Range(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
