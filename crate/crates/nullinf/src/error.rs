use thiserror::Error;

/// Errors raised by the library. Each variant names the failing condition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("finite-difference step error: {0}")]
    Step(String),
    #[error("fiber chart error: {0}")]
    FiberChart(String),
    #[error("point is not critical: |field| = {0:e}")]
    NotCritical(f64),
    #[error("tolerance ambiguous: {0}")]
    ToleranceAmbiguous(String),
    #[error("integration step failure: {0}")]
    StepFailure(String),
    #[error("trajectory left the chart: {0}")]
    ChartExit(String),
    #[error("unknown theorem tag `{0}`")]
    UnknownTheoremTag(String),
    #[error("CFL violation: {0}")]
    CflViolation(String),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("quadrature error: {0}")]
    Quadrature(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("insufficient range: {0}")]
    InsufficientRange(String),
    #[error("threshold violation: {0}")]
    ThresholdViolation(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("aliasing: {0}")]
    Alias(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("expression parse error: {0}")]
    Parse(String),
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { location: location.into(), message: message.into() }
    }

    /// Process exit code: 2 for configuration, 4 for threshold gates, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::UnknownTheoremTag(_) => 2,
            Error::ThresholdViolation(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
