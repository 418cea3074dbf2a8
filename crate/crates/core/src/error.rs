use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad atom index, infeasible point, malformed atom set.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Unknown generator/method names, invalid parameters, unreadable files.
    #[error("config error: {0}")]
    Config(String),

    #[error("atom file {path}: row {row}, column {column}: {message}")]
    AtomParse {
        path: String,
        row: usize,
        column: usize,
        message: String,
    },

    /// The backtracking loop ran out of trials; the last trial step is kept for inspection.
    #[error(
        "line search failed after {backtracks} backtracks (last step {last_step:e}, slope {slope:e})"
    )]
    LineSearch {
        backtracks: usize,
        last_step: f64,
        slope: f64,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-code class used by the command-line front end: 2 for broken solver
    /// contracts, 1 for everything the user can fix.
    pub fn is_contract_violation(&self) -> bool {
        matches!(self, Error::LineSearch { .. })
    }
}
