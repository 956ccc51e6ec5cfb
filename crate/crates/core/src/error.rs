use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Coupling at or below the collapse bound g = -1/2, where the centrifugal
    /// parameter turns complex.
    #[error("coupling g = {g} is at or below the collapse bound -1/2")]
    Collapse { g: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The angular eigenvalue sequence produced a negative square root.
    #[error("angular parameter beta = {beta} is negative (k = {k})")]
    NegativeBeta { k: u32, beta: f64 },

    #[error("series did not converge within {nterms} terms (tail bound {tail:e})")]
    Convergence { nterms: usize, tail: f64 },

    #[error("boundary seed underflows at truncation L = {length}")]
    Truncation { length: f64 },

    #[error("monodromy determinant drifted from 1 by {defect:e}; integration step too coarse")]
    Conditioning { defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
