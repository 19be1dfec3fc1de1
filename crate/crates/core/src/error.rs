use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by the CLI to choose an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("invalid probability {value} for {what}: must lie in [0, 1]")]
    InvalidProbability { what: &'static str, value: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cannot normalize an all-zero amplitude vector")]
    CannotNormalize,
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),
    #[error("degenerate class distribution: {0}")]
    DegenerateClass(String),
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::InvalidSpec(_) | Error::Json(_) => ErrorClass::Config,
            Error::Io { .. }
            | Error::Csv(_)
            | Error::DegenerateClass(_)
            | Error::InvalidInput(_)
            | Error::CannotNormalize => ErrorClass::Data,
            Error::InvalidGate(_)
            | Error::InvalidObservable(_)
            | Error::InvalidProbability { .. }
            | Error::InvalidParameters(_)
            | Error::DegenerateProblem(_)
            | Error::UndefinedMetric(_)
            | Error::Numerical(_) => ErrorClass::Numerical,
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGate(_) => "invalid_gate",
            Error::InvalidObservable(_) => "invalid_observable",
            Error::InvalidProbability { .. } => "invalid_probability",
            Error::InvalidInput(_) => "invalid_input",
            Error::CannotNormalize => "cannot_normalize",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::DegenerateProblem(_) => "degenerate_problem",
            Error::DegenerateClass(_) => "degenerate_class",
            Error::UndefinedMetric(_) => "undefined_metric",
            Error::Numerical(_) => "numerical_failure",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { what, value })
    }
}
