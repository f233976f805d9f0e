use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("schema error at {path} (line {line}, column {column}): {msg}")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("formula defect: {0}")]
    FormulaDefect(String),
    #[error("oracle refused: {needed} cover vertices exceed the cap of {cap}")]
    CapExceeded { needed: u64, cap: u64 },
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
