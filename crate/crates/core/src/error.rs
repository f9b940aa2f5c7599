use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: missing required field \"{field}\"")]
    MissingField { line: usize, field: &'static str },

    #[error("line {line}: duplicate document id \"{id}\"")]
    DuplicateId { line: usize, id: String },

    #[error("line {line}: document \"{id}\" has an empty abstract")]
    EmptyAbstract { line: usize, id: String },

    #[error("seed lexicon contains no usable terms")]
    EmptyLexicon,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("corpus has {0} document(s); at least 2 are needed to split")]
    CorpusTooSmall(usize),

    #[error("network error fetching {url}: {message}")]
    Network { url: String, message: String },

    #[error("{0} did not return HTML")]
    NotHtml(String),

    #[error("no papers could be parsed from {0}")]
    NoPapersParsed(String),

    #[error("training split is empty")]
    EmptyTrainingSplit,

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error("node \"{0}\" is missing from the community assignment")]
    MissingNode(String),

    #[error("no seed stem is present in the graph")]
    NoSeedInGraph,

    #[error("training papers contain a single label class; both are needed")]
    SingleClass,

    #[error("nothing to evaluate")]
    EmptyInput,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
