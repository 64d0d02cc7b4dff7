use thiserror::Error;

/// Errors raised by the steering toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("matrix is not Hermitian (max |m - m†| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parameter `{name}` = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("degenerate tomography data: {0}")]
    DegenerateData(String),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
}

impl Error {
    pub(crate) fn dimension(expected: impl Into<String>, rows: usize, cols: usize) -> Self {
        Error::Dimension {
            expected: expected.into(),
            found: format!("{rows}x{cols}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
