use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("law has no Bernoulli part (sum of min(f(k), f(k+1)) is zero)")]
    NoBernoulliPart,
    #[error("theta series not converged within {0} terms")]
    Truncation(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
