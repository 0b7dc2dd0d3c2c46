use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("missing section `{0}`")]
    MissingSection(&'static str),

    #[error("invalid name `{0}`")]
    InvalidName(String),

    #[error("reserved name `{0}` cannot be used here")]
    Reserved(String),

    #[error("duplicate name `{0}`")]
    Duplicate(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("alphabets not disjoint: `{0}` is declared as input and output")]
    NotDisjoint(String),

    #[error("model already contains quiescence transitions")]
    AlreadyQuiescent,

    #[error("invalid quiescence transitions: {0}")]
    BadQuiescence(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("model is not deterministic")]
    NotDeterministic,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("malformed test purpose: {0}")]
    MalformedTestPurpose(String),

    #[error("regex: {0}")]
    Regex(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
