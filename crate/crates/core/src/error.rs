use thiserror::Error;

/// Errors raised by the special-function evaluators, the radial solvers and
/// the scaling experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("{path} path refused: {reason}")]
    OutOfWindow { path: &'static str, reason: String },

    #[error("series refused at nu={nu}, z={z}: {reason}")]
    SeriesBudget { nu: f64, z: f64, reason: String },

    #[error("result not representable in binary64: {0}")]
    Overflow(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature under-resolved: {0}")]
    UnderResolved(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("measurement failed at lambda={lambda}: {reason}")]
    Measurement { lambda: f64, reason: String },

    #[error("singular value computation failed: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
