use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: dimension mismatch, expected {expected} values but found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: duplicate word {word:?}")]
    DuplicateWord { line: usize, word: String },

    #[error("empty input")]
    Empty,

    #[error("truncated stream: {0}")]
    Truncated(String),

    #[error("header/payload size mismatch: {0}")]
    SizeMismatch(String),

    #[error("word {0:?} cannot be stored in this format")]
    InvalidWord(String),

    #[error("zero-norm vector")]
    ZeroNorm,

    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("zero variance input")]
    ZeroVariance,

    #[error("out-of-vocabulary word {0:?}")]
    Oov(String),

    #[error("not enough usable data: {0}")]
    Insufficient(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Input {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn in_file(path: impl AsRef<std::path::Path>, source: Error) -> Self {
        Error::Input {
            path: path.as_ref().display().to_string(),
            source: Box::new(source),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
