use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("corpus contains no documents")]
    EmptyCorpus,

    #[error("duplicate document id {0:?}")]
    DuplicateId(String),

    #[error("prefix size {n} out of range for corpus of {size} documents")]
    PrefixOutOfRange { n: usize, size: usize },

    #[error("vocabulary is empty: every document is empty after preprocessing")]
    EmptyVocabulary,

    #[error("token {token:?} in document {doc_id:?} is not in the vocabulary")]
    OutOfVocabulary { token: String, doc_id: String },

    #[error("invalid tag lexicon: {0}")]
    Lexicon(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("topic {topic} out of range (number of topics: {topics})")]
    TopicOutOfRange { topic: usize, topics: usize },

    #[error("assignments cover different documents; only in first: {only_a:?}, only in second: {only_b:?}")]
    DocSetMismatch {
        only_a: Vec<String>,
        only_b: Vec<String>,
    },

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    /// True for errors raised by a broken internal invariant rather than bad
    /// user input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(self, Error::Contract(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
