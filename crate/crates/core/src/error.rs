use thiserror::Error;

use crate::matrix::SecantReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("at least one gain required")]
    EmptyGains,

    #[error("gains must be positive (gain {index} is {value})")]
    NonPositiveGain { index: usize, value: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("secant condition violated: product {} >= bound (margin {})", .0.product, .0.margin)]
    SecantViolated(SecantReport<f64>),

    #[error("certificate verification failed: negativity margin {margin} <= tolerance {tolerance}")]
    VerificationFailed { margin: f64, tolerance: f64 },

    #[error("feedforward gain {delta} does not exceed the IFP threshold {threshold}")]
    ThresholdViolated { delta: f64, threshold: f64 },

    #[error("step dt = {dt} too large; must be below {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("invalid interconnection: {0}")]
    InvalidSpec(String),

    #[error("invalid initial state: expected {expected} entries, got {actual}")]
    InitialState { expected: usize, actual: usize },
}

impl Error {
    /// Stable variant name, used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::EmptyGains => "EmptyGains",
            Self::NonPositiveGain { .. } => "NonPositiveGain",
            Self::NonPositive { .. } => "NonPositive",
            Self::ZeroDimension => "ZeroDimension",
            Self::DimensionMismatch { .. } => "DimensionMismatch",
            Self::SecantViolated(_) => "SecantViolated",
            Self::VerificationFailed { .. } => "VerificationFailed",
            Self::ThresholdViolated { .. } => "ThresholdViolated",
            Self::StepTooLarge { .. } => "StepTooLarge",
            Self::InvalidSpec(_) => "InvalidSpec",
            Self::InitialState { .. } => "InitialState",
        }
    }

    /// Whether the error reports a violated stability condition rather than bad input.
    pub fn is_condition_violation(&self) -> bool {
        matches!(
            self,
            Self::SecantViolated(_) | Self::VerificationFailed { .. } | Self::ThresholdViolated { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
