use crate::config::ConfigViolation;
use crate::diagram::Diagnostics;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Diagnostics(#[from] Diagnostics),
    #[error("invalid configuration: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidConfig(Vec<ConfigViolation>),
    #[error("scope too small: {0}")]
    ScopeTooSmall(String),
    #[error("bad scope override: {0}")]
    ScopeSyntax(String),
    /// A decoded witness failed the membership re-check. Always a bug.
    #[error("witness rejected by the membership predicates: {0}")]
    UnsoundWitness(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
