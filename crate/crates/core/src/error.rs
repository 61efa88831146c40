use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty sample set")]
    EmptySamples,
    #[error("sample source exhausted: needed {needed}, had {available}")]
    InsufficientSamples { needed: usize, available: usize },
    #[error("inverse transform has imaginary residual {0:e}")]
    ImaginaryResidual(f64),
    #[error("sample range {range} exceeds bound {bound:.1}; variance estimate inconsistent")]
    RangeCheckFailed { range: i64, bound: f64 },
    #[error("projected state count {projected:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded { projected: f64, budget: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(format!("malformed JSON: {e}"))
    }
}
