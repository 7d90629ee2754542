use thiserror::Error;

/// Errors raised while loading documents or running an analysis.
///
/// Schema errors carry a JSON-pointer-like path (`/f/2`) so a malformed input
/// file can be fixed without guessing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{path}: missing field `{field}`")]
    MissingField { path: String, field: String },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("{path}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("{path}: duplicate label `{label}`")]
    DuplicateLabel { path: String, label: String },

    #[error("{path}: cannot parse `{text}` as a rational")]
    ParseRational { path: String, text: String },

    #[error("{path}: negative probability {value}")]
    NegativeEntry { path: String, value: String },

    #[error("{path}: probabilities sum to {sum}, expected exactly 1")]
    NotNormalized { path: String, sum: String },

    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("index {index} outside {what}")]
    OutOfRange { what: &'static str, index: usize },

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("randomized branch at a node evaluated without a sampler")]
    NeedsSampler,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
