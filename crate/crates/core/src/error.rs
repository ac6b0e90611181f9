use thiserror::Error;

/// Errors raised by the solver and the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("coincident mode roots at lambda = {lambda}")]
    RootCoincidence { lambda: f64 },

    #[error("admissibility violated: {0}")]
    AdmissibilityViolated(String),

    #[error("degenerate mode elimination at r = {r}")]
    DegenerateMode { r: f64 },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
