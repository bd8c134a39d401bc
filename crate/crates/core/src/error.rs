use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// The weak-coupling expansion diverges on the critical line `lambda = 1 + 2 alpha`.
    #[error("parameters sit on the critical line: |lambda - 1 - 2 alpha| = {distance:e}")]
    Criticality { distance: f64 },

    #[error("decoherence factor of mode k={k} at t={t} is negative ({value:e})")]
    NegativeFactor { k: usize, t: f64, value: f64 },

    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {estimate:e})")]
    NoConvergence { estimate: f64, evaluations: usize },

    #[error("exact diagonalization supports N <= {max}, got N = {n}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("smaller eigenvalue at t=0 is {value:e}, expected 0 for a pure initial state")]
    UnexpectedBranch { value: f64 },

    #[error("all {points} sweep points failed; first failure: {first}")]
    SweepFailed { points: usize, first: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
