use thiserror::Error;

/// Errors raised by the library. Certification outcomes are not errors; they
/// are reported through [`crate::polytope::Verdict`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("failed to parse word {input:?}: {reason}")]
    WordParse { input: String, reason: String },

    #[error("tuple is not realizable by a pair of real matrices")]
    NotRealizable,

    #[error("realization is numerically degenerate: {0}")]
    Degenerate(String),

    #[error("not certifiable: {0}")]
    NotCertifiable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
