use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: malformed record: {message}")]
    Malformed { file: String, line: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid corpus: {0}")]
    Corpus(String),

    #[error("triplet references missing tweet `{0}`")]
    MissingTweet(String),

    #[error("tweet `{tweet_id}` at {timestamp} falls outside every time window")]
    OutsideWindows { tweet_id: String, timestamp: String },

    #[error("annotation: {0}")]
    Annotation(String),

    #[error("agreement unavailable: {0}")]
    AgreementUnavailable(String),

    #[error("graph: {0}")]
    Graph(String),

    #[error("gazetteer: {0}")]
    Gazetteer(String),

    #[error("features: {0}")]
    Features(String),

    #[error("feature group `{0}` requested without its context")]
    MissingContext(&'static str),

    #[error("missing lexicon role `{0}`")]
    MissingLexicon(&'static str),

    #[error("training: {0}")]
    Training(String),

    #[error("dimension mismatch: model expects {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("evaluation: {0}")]
    Eval(String),

    #[error("synthetic config: {0}")]
    Synth(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable kind, used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Malformed { .. } => "malformed",
            Error::Parse(_) => "parse",
            Error::Corpus(_) => "corpus",
            Error::MissingTweet(_) => "missing-tweet",
            Error::OutsideWindows { .. } => "outside-windows",
            Error::Annotation(_) => "annotation",
            Error::AgreementUnavailable(_) => "agreement-unavailable",
            Error::Graph(_) => "graph",
            Error::Gazetteer(_) => "gazetteer",
            Error::Features(_) => "features",
            Error::MissingContext(_) => "missing-context",
            Error::MissingLexicon(_) => "missing-lexicon",
            Error::Training(_) => "training",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::Eval(_) => "eval",
            Error::Synth(_) => "synth",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
