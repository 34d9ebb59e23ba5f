use thiserror::Error;

/// Errors shared across the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the operation's stated domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form kernel was evaluated inside its singularity guard band.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A Fourier mode index exceeded the anti-aliasing guard for the grid.
    #[error("aliasing: mode {n} exceeds the guard {guard} for M = {m}")]
    Aliasing { n: i64, guard: i64, m: usize },

    /// A structural axiom failed, with a witness description.
    #[error("axiom {axiom} violated: {witness}")]
    Axiom {
        axiom: &'static str,
        witness: String,
    },

    /// A numeric contract (an inequality the finite model must satisfy) failed.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
