//! Error type shared across the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("empty feature table")]
    EmptyFeatureTable,

    #[error("duplicate segment {segment:?} in feature table")]
    DuplicateSegment { segment: String },

    #[error("unmatchable input at byte {offset}: {found:?}")]
    Unsegmentable { offset: usize, found: char },

    #[error("no phoneme tokens in corpus")]
    EmptyCorpus,

    #[error("line {line}: token {token:?} not covered by the feature table: {reason}")]
    BadToken {
        token: String,
        line: usize,
        reason: String,
    },

    #[error("line {line}: token {token:?} outside the merge map domain for language {lang}")]
    OutOfDomain {
        token: String,
        lang: String,
        line: usize,
    },

    #[error("coverage requires >=2 languages")]
    CoverageNeedsTwoLanguages,

    #[error("cannot split {records} records into {folds} folds")]
    TooFewRecords { records: usize, folds: usize },

    #[error("fold {fold}: recognizer returned {got} hypotheses for {want} records")]
    FoldOutputMismatch { fold: usize, got: usize, want: usize },

    #[error("replacement probability precondition violated: {msg}")]
    BadProbabilityInput { msg: String },

    #[error("line {line}: empty reference")]
    EmptyReference { line: usize },

    #[error("line counts differ: {left} has {left_lines}, {right} has {right_lines}")]
    LineCountMismatch {
        left: String,
        left_lines: usize,
        right: String,
        right_lines: usize,
    },

    #[error("external command {cmd:?} exited with status {status}")]
    ExternalCommand { cmd: String, status: i32 },

    #[error("duplicate source tag ({lang}, {tag})")]
    TagCollision { lang: String, tag: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
