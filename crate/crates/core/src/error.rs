use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
    #[error("{what} exceeds budget ({value} > {limit})")]
    Budget {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("ill-formed formula: {0}")]
    Formula(String),
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("{0}")]
    Domain(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn budget(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::Budget { what, value, limit })
    } else {
        Ok(())
    }
}
