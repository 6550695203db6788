use num_complex::Complex64;
use thiserror::Error;

use crate::minimality::PbhWitness;

/// Errors raised by the realization toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation point is within tolerance of the pole {eigenvalue}")]
    Pole { eigenvalue: Complex64 },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("realization is not minimal ({} PBH witness(es))", witnesses.len())]
    NotMinimal { witnesses: Vec<PbhWitness> },

    #[error("only pseudo-spectral factorization exists: {0}")]
    PseudoSpectral(String),
}

impl Error {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
