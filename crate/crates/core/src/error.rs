use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("missing mapped column `{column}` (field `{field}`)")]
    MissingColumn { field: String, column: String },
    #[error("invalid color: {0}")]
    InvalidColor(String),
    #[error("insufficient denotation: need at least 2 chips, got {0}")]
    InsufficientDenotation(usize),
    #[error("degenerate denotation: all chips identical")]
    DegenerateDenotation,
    #[error("word `{word}`: {source}")]
    InWord {
        word: String,
        #[source]
        source: Box<Error>,
    },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("too few rows: need at least {needed}, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("rank-deficient design: predictor is constant")]
    RankDeficient,
    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("word `{word}` does not apply to referent {referent}")]
    NotApplicable { word: String, referent: String },
    #[error("need at least {needed} eligible rounds, only {available} available")]
    InsufficientRounds { needed: usize, available: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
