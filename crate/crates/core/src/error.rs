use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two linear forms (or a form and a context) disagree on the number of modes.
    #[error("mode count mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state (or a derived state) carries too much probability near the
    /// edge of its grid to be trusted.
    #[error("{what} not resolved on grid: edge mass {edge_mass:e} exceeds {threshold:e}")]
    Resolution {
        what: String,
        edge_mass: f64,
        threshold: f64,
    },

    #[error("value {value} outside representable range [{min}, {max}]")]
    Range { value: f64, min: f64, max: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("lattice error: {0}")]
    Lattice(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn lattice(msg: impl Into<String>) -> Self {
        Error::Lattice(msg.into())
    }
}
