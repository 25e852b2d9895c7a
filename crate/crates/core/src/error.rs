use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order n = {0} (need n >= {1})")]
    InvalidOrder(usize, usize),
    #[error("invalid dimension m = {0} (need m >= 1)")]
    InvalidDimension(usize),
    #[error("generator {label} is not defined for n = {n}, m = {m}")]
    InvalidLabel { label: String, n: usize, m: usize },
    #[error("vector field {0} is not a point field (component of jet order > 0)")]
    NotPointField(String),
    #[error("vector fields live on different spaces (m = {0} vs m = {1})")]
    DimensionMismatch(usize, usize),
    #[error("bracket [{0}, {1}] leaves the span of the basis")]
    NonClosure(String, String),
    #[error("basis element {0} is linearly dependent on the preceding ones")]
    LinearDependence(String),
    #[error("Wronskian of the solution basis is not a nonzero constant: {0}")]
    DegenerateWronskian(String),
    #[error("xi = {0} does not solve the third-order xi-equation")]
    NotXiSolution(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("flow left the integration interval at x = {0}")]
    FlowOutOfRange(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
