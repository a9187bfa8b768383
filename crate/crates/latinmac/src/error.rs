use thiserror::Error;

/// Errors produced by schedule construction, analysis and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested combinatorial construction does not exist for these
    /// parameters (e.g. a cyclic square of non-prime order).
    #[error("construction unsupported: {0}")]
    ConstructionUnsupported(String),

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Experiment configuration is missing keys or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// A textual dump could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
