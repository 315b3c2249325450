use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate state: squared norm {0:e} is not usable")]
    DegenerateState(f64),

    #[error("grid too small: {what} carries {found:e} (limit {limit:e})")]
    GridTooSmall {
        what: &'static str,
        found: f64,
        limit: f64,
    },

    #[error("eigensolver did not converge: level {level} residual {residual:e} exceeds {limit:e}")]
    Convergence {
        level: usize,
        residual: f64,
        limit: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid inputs rather than by a computation
    /// that could not be carried out on otherwise valid inputs.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
