use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BbsError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("boundary mode error: {0}")]
    Mode(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameters are not in the admissible class: {0}")]
    NotInA(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, BbsError>;
