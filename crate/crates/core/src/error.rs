use std::path::PathBuf;

use crate::category::Category;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot fit a vocabulary: every section is empty after preprocessing")]
    EmptyVocabulary,

    #[error("degenerate label: category {0} has only one class in the training data")]
    DegenerateCategory(Category),

    #[error("degenerate label: oversampling needs at least one positive and one negative instance")]
    DegenerateLabel,

    #[error(
        "SMOTE needs at least {needed} minority instances (k + 1), found {found}; \
         use the Duplicate oversampler for this data"
    )]
    TooFewForSmote { needed: usize, found: usize },

    #[error("section '{0}' has no labels and cannot be used for training")]
    Unlabeled(String),

    #[error("model schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("model file is invalid: {0}")]
    ModelFormat(String),

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("feature importance requires a linear SVM model")]
    NotLinear,

    #[error("transport error: {0}")]
    Transport(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Errors caused by bad input files or arguments rather than by a failing
    /// computation. The CLI maps these to exit status 2.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Io { .. }
            | Error::Malformed { .. }
            | Error::UnknownLabel(_)
            | Error::Pattern(_)
            | Error::InvalidArgument(_)
            | Error::SchemaVersion { .. }
            | Error::ModelFormat(_)
            | Error::Unlabeled(_) => true,
            Error::Fold { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
