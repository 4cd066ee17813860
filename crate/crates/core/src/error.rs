use thiserror::Error;

/// Errors raised by landscape operations.
///
/// `Usage` covers caller mistakes (bad dimensions, empty ranges, invalid
/// configuration). `Numerical` covers failures of the mathematics itself,
/// such as a loss returning NaN or an eigensolver not converging.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("numerical error: {message}")]
    Numerical {
        message: String,
        /// The parameter vector at which the failure happened, if any.
        point: Option<Vec<f64>>,
    },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical {
            message: msg.into(),
            point: None,
        }
    }

    pub fn numerical_at(msg: impl Into<String>, point: &[f64]) -> Self {
        Error::Numerical {
            message: msg.into(),
            point: Some(point.to_vec()),
        }
    }

    /// True for errors caused by invalid input rather than by the computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
