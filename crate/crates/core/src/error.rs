//! Shared error type for the core crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside its valid domain.
    #[error("parameter domain: {0}")]
    ParamDomain(String),

    /// Array/grid dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Mutually inconsistent configuration values.
    #[error("configuration: {0}")]
    Config(String),

    /// An NPI has an empty active set, so its effect cannot be estimated.
    #[error("identifiability: {0}")]
    Identifiability(String),

    /// A convergence diagnostic cannot be computed from the given trace.
    #[error("diagnostic unavailable: {0}")]
    DiagnosticUnavailable(String),

    /// An iterative routine ran out of budget; carries the best point found.
    #[error("iteration budget exhausted after {iterations} iterations (grad norm {grad_norm:.3e})")]
    BudgetExhausted {
        iterations: usize,
        grad_norm: f64,
        best: Vec<f64>,
    },

    /// Lookup of a country or NPI name failed.
    #[error("lookup: {0}")]
    Lookup(String),

    /// Countries cannot be partitioned as requested.
    #[error("partition: {0}")]
    Partition(String),

    /// Effectiveness values in incompatible units were mixed.
    #[error("unit mismatch: {0}")]
    UnitMismatch(String),

    /// The requested quantity is undefined for the given input (e.g. empty holdout).
    #[error("undefined result: {0}")]
    UndefinedResult(String),

    /// Input file could not be parsed.
    #[error("parse: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
