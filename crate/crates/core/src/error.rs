use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("truncation warning: {0}")]
    TruncationWarning(String),

    #[error("singular step at t = {t}")]
    SingularStep { t: f64 },

    #[error("not supported: {0}")]
    NotSupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
