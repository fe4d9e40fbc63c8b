//! Crate-wide error type.

use std::path::PathBuf;

use crate::config::ConfigError;

/// Errors produced by the numerical layers and the sweep driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A direction vector failed the unit-norm check.
    #[error("vector is not unit length: |v|^2 = {norm_sq}")]
    NonUnitVector { norm_sq: f64 },

    /// A two-qubit amplitude vector is not normalized.
    #[error("state is not normalized: <psi|psi> = {norm_sq}")]
    NonNormalizedState { norm_sq: f64 },

    /// A numeric argument is outside its documented domain.
    #[error("{name} out of range: got {value}, expected {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A detector region could not be constructed.
    #[error("invalid detector region: {reason}")]
    InvalidRegion { reason: &'static str },

    /// The z -> infinity limit of z*R did not settle.
    #[error("z*R(z) did not converge after {doublings} doublings")]
    AsymptoticsDiverged { doublings: u32 },

    /// An outcome probability vector does not sum to one.
    #[error("invalid probability vector: sum = {sum}")]
    InvalidProbabilities { sum: f64 },

    /// An estimator was asked for a value with zero recorded coincidences.
    #[error("no coincidence counts recorded")]
    NoData,

    /// Sweep configuration problem.
    #[error(transparent)]
    Config(#[from] ConfigError),

    /// File I/O failure, with the offending path.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wrap an I/O error with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
