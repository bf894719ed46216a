use std::path::PathBuf;

use crate::lang::SpecError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A line-oriented input (annotations, thesaurus, vectors) is malformed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Annotation indices do not describe a well-formed document structure.
    #[error("line {line}: structure error: {message}")]
    Structure { line: usize, message: String },

    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("knowledge base is empty")]
    EmptyKnowledgeBase,

    #[error("performance metric mismatch: application {app_id} uses {found:?}, request uses {expected:?}")]
    MetricMismatch {
        app_id: String,
        expected: String,
        found: String,
    },

    #[error("duplicate application id {0:?}")]
    DuplicateApplication(String),

    #[error("feature id {0:?} already names a different specification")]
    DuplicateFeatureId(String),

    #[error("relevance {0} is outside [0, 1]")]
    InvalidRelevance(f64),

    #[error("unknown application {0:?}")]
    UnknownApplication(String),

    #[error("unknown feature {0:?}")]
    UnknownFeature(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid feedback: {0}")]
    InvalidFeedback(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("extraction failed for {feature}: {message}")]
    Extraction { feature: String, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures caused by the filesystem rather than by input content.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
