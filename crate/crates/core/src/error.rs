use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("index violation: expected index {expected}, found {found}")]
    IndexViolation { expected: String, found: usize },

    #[error("{what} exceeds the limit of {limit} (found {found}); pass an override to lift it")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        found: usize,
    },

    #[error("permutation {perm} does not belong to {group}")]
    NotAMember { perm: String, group: &'static str },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unknown orbit: {0}")]
    UnknownOrbit(String),

    #[error("unknown molecule: {0}")]
    UnknownMolecule(String),

    #[error("automorphism is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("invalid involution: {0}")]
    InvalidInvolution(String),

    #[error("domain must be all partitions of {0}")]
    DomainNotFull(usize),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    /// Limit errors are reported separately by the command line front end.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }
}
