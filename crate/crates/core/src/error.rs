use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("critical lightray: {0}")]
    CriticalRay(String),
    #[error("ambiguous localization: {0}")]
    Ambiguous(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Contract(_) => "contract",
            Error::Solver(_) => "solver",
            Error::Domain(_) => "domain",
            Error::Truncation(_) => "truncation",
            Error::CriticalRay(_) => "critical_ray",
            Error::Ambiguous(_) => "ambiguous",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
