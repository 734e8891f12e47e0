use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(&'static str),
    #[error("interval endpoint {0} is a root of the polynomial")]
    EndpointIsRoot(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("degenerate evaluation point: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
