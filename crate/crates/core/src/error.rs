use thiserror::Error;

/// Error taxonomy shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input is too short, too long, or has too few usable points.
    #[error("size error: {0}")]
    Size(String),
    /// An unknown name was requested from a catalog.
    #[error("lookup error: {0}")]
    Lookup(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition error: {0}")]
    Precondition(String),
    /// A derivative or expansion order is out of range.
    #[error("order error: {0}")]
    Order(String),
}

impl Error {
    /// Short taxonomy name, used by the CLI on stderr.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Size(_) => "size",
            Error::Lookup(_) => "lookup",
            Error::Precondition(_) => "precondition",
            Error::Order(_) => "order",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
