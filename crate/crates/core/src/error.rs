//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A direction vector that cannot be normalized.
    #[error("direction norm {norm:.3e} is not normalizable (must be finite and exceed 1e-12)")]
    ZeroVector { norm: f64 },

    /// A scenario side with no settings.
    #[error("settings_{side} must contain at least one direction")]
    EmptySettings { side: char },

    /// Two settings on the same side closer than the distinctness threshold.
    #[error(
        "settings_{side}[{first}] and settings_{side}[{second}] coincide \
         (angular separation {separation:.3e} rad <= 1e-9)"
    )]
    DuplicateDirection {
        side: char,
        first: usize,
        second: usize,
        separation: f64,
    },

    /// A table whose dimensions disagree with the scenario or with itself.
    #[error("shape mismatch in {what}: expected {expected}, got {got}")]
    ShapeMismatch {
        what: String,
        expected: String,
        got: String,
    },

    /// Malformed or invalid input document; the path names the offending element.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    /// A hidden-state model violating its invariants.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Strategy enumeration would exceed the size guard.
    #[error(
        "2^{exponent} deterministic strategies exceed the 2^{max_exponent} enumeration guard"
    )]
    TooLarge { exponent: u32, max_exponent: u32 },

    /// The LP solver reported a state that the polytope formulations rule out.
    #[error("LP solver failure: {0}")]
    Solver(String),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn shape(
        what: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        Error::ShapeMismatch {
            what: what.into(),
            expected: expected.into(),
            got: got.into(),
        }
    }
}
