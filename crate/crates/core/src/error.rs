use thiserror::Error;

pub type Result<T, E = GroverError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroverError {
    #[error("marked set is empty; at least one target is required")]
    EmptyMarkedSet,

    #[error("index {index} out of range for database of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("database size {n} is too small (need at least {min})")]
    SizeTooSmall { n: usize, min: usize },

    #[error("number of targets {ell} must lie in [1, {n}]")]
    EllOutOfRange { ell: usize, n: usize },

    #[error("dimension mismatch: state has {state} amplitudes, instance has size {instance}")]
    DimensionMismatch { state: usize, instance: usize },

    #[error(
        "database size {n} exceeds the memory cap of {cap} amplitudes; raise it with --memory-cap"
    )]
    BudgetExceeded { n: usize, cap: usize },

    #[error("restricted matrix of order {order} exceeds the dense-matrix cap {cap}")]
    CapExceeded { order: usize, cap: usize },

    #[error("expected cost is singular at j = {j}: stop point has zero success probability")]
    SingularCost { j: f64 },

    #[error("stationarity residual is singular at j = {j}")]
    SingularCotangent { j: f64 },

    #[error("first-order seed undefined: alpha^2 = {alpha_sq} < 2")]
    OutOfValidityRegion { alpha_sq: f64 },

    #[error(
        "fixed-point iteration did not converge after {iterations} steps (last |dj| = {last_step})"
    )]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("fixed-point iterate left (0, alpha/theta) at step {iteration}: no interior stationary point")]
    NoStationaryPoint { iteration: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl GroverError {
    /// Stable machine-readable code, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            GroverError::EmptyMarkedSet => "EmptyMarkedSet",
            GroverError::IndexOutOfRange { .. } => "IndexOutOfRange",
            GroverError::SizeTooSmall { .. } => "SizeTooSmall",
            GroverError::EllOutOfRange { .. } => "EllOutOfRange",
            GroverError::DimensionMismatch { .. } => "DimensionMismatch",
            GroverError::BudgetExceeded { .. } => "BudgetExceeded",
            GroverError::CapExceeded { .. } => "CapExceeded",
            GroverError::SingularCost { .. } => "SingularCost",
            GroverError::SingularCotangent { .. } => "SingularCotangent",
            GroverError::OutOfValidityRegion { .. } => "OutOfValidityRegion",
            GroverError::NoConvergence { .. } => "NoConvergence",
            GroverError::NoStationaryPoint { .. } => "NoStationaryPoint",
            GroverError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
