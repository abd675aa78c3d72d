use thiserror::Error;

use crate::angular::HalfInt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Quantum numbers outside their allowed range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A probe detuning coincides with an atomic resonance.
    #[error("probe is on resonance with the f'={f_prime} line (detuning {detuning:e} rad/s)")]
    OnResonance { f_prime: HalfInt, detuning: f64 },

    /// Malformed input file.
    #[error("{source_name}:{line}: {message}")]
    Parse { source_name: String, line: usize, message: String },

    /// Input that parses but violates a physical or range constraint.
    #[error("invalid configuration: {0}")]
    Validation(String),

    /// Two independent computation routes disagree.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// The requested operation is not defined for the given spin orientation.
    #[error("unsupported geometry: {0}")]
    Geometry(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
