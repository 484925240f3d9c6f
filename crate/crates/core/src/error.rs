use thiserror::Error;

/// Errors surfaced by the verification toolkit.
///
/// The split mirrors the CLI exit-code contract: `Config` and `Usage` are
/// caller mistakes (exit 2), everything else signals that a mathematical
/// check could not even be set up.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Mismatched shapes, incompatible groups, incomplete maps.
    #[error("structural error: {0}")]
    Structural(String),

    /// Non-finite data or an iteration that failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A stated precondition does not hold for the given inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Symbol extraction was asked for on an operator that is not Laurent.
    #[error("operator is not Laurent: covariance defect {defect:.3e}, algebra defect {algebra_defect:.3e}")]
    NotLaurent { defect: f64, algebra_defect: f64 },

    /// A truncation-window guard was violated.
    #[error("window error: {0}")]
    Window(String),

    /// Input outside the mathematical domain (e.g. |z| != 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration file.
    #[error("config error: {0}")]
    Config(String),

    /// Invalid command-line usage (bad grids, missing names).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
