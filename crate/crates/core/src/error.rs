use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's contract (wrong tags, mismatched shapes, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature or transform parameters are inconsistent.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Sampled data does not decay at the edge of its grid.
    #[error("precondition failed on axis `{axis}`: boundary magnitude {boundary:.3e} exceeds {threshold:.1e} (peak {peak:.3e})")]
    BoundaryDecay {
        axis: String,
        boundary: f64,
        peak: f64,
        threshold: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Every validation failure found in a run configuration.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    InvalidConfig(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("report `{identity}` took {seconds:.2} s, over the {budget:.0} s budget")]
    OverBudget {
        identity: String,
        seconds: f64,
        budget: f64,
    },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }

    /// Wraps the error with a description of what was running.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
