use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An eigen-computation did not reach its tolerance.
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    /// The support graph is not strongly connected; `block` is a closed set A with
    /// K vanishing on A x A^c.
    #[error("operator is reducible: rows {block:?} do not reach the remaining indices")]
    Reducible { block: Vec<usize> },

    /// A computed quantity broke an internal consistency check.
    #[error("numerical breakdown: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the caller's input rather than by arithmetic.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Reducible { .. })
    }
}
