use thiserror::Error;

/// Errors raised by the rate engines and the analysis layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument outside the domain of {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("degenerate saddle point at t = {location}: second derivative vanishes")]
    DegenerateSaddle { location: f64 },

    #[error("stationary point at t = {location} is not a minimum (f'' = {curvature})")]
    NotAMinimum { location: f64, curvature: f64 },

    #[error("path crosses the origin tangentially at t = {time}")]
    NonTransversalCrossing { time: f64 },

    #[error("survival amplitude vanished; the rate is infinite")]
    InfiniteRate,

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    QuadratureFailed { tolerance: f64, estimate: f64 },

    #[error("numerical failure in {op}: {reason}")]
    Numeric { op: &'static str, reason: String },

    #[error("too few peaks for a period estimate: found {found}, need {needed}")]
    TooFewPeaks { found: usize, needed: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn numeric(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Numeric {
            op,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::InfiniteRate
                | Error::QuadratureFailed { .. }
                | Error::Numeric { .. }
                | Error::DegenerateSaddle { .. }
                | Error::NonTransversalCrossing { .. }
                | Error::TooFewPeaks { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
