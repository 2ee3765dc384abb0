use thiserror::Error;

use crate::spectral::Mode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("{what}: argument {value} outside admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Zero pivot met during elimination.
    #[error("matrix is singular (zero pivot in column {column})")]
    Singular { column: usize },

    /// Condition estimate above the accepted ceiling; the parameter set is
    /// likely in the exceptional set where the integral equations lose
    /// unique solvability.
    #[error("matrix is ill-conditioned: condition estimate {condition:.3e} exceeds {limit:.1e}")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("coefficients for mode {0} have not been solved")]
    ModeMissing(Mode),

    #[error("point z = {re} + {im}i lies within {distance:.1e} of the crack line")]
    OnCut { re: f64, im: f64, distance: f64 },

    #[error("grid must be strictly increasing and start at -1")]
    BadGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
