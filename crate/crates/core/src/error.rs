use thiserror::Error;

use crate::cartan::NodeSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan type {label}_{rank}")]
    InvalidType { label: String, rank: usize },

    #[error("node set must be non-empty")]
    EmptySubset,

    #[error("{inner} is not a subset of {outer}")]
    NotSubset { inner: NodeSet, outer: NodeSet },

    #[error("element not in subsystem W_{0}")]
    NotInSubsystem(NodeSet),

    #[error("matrix is not an element of the finite Weyl group")]
    NotWeylElement,

    #[error("translation is not in the coroot lattice")]
    NotInLattice,

    #[error("no admissible lattice element when K = J")]
    KEqualsJ,

    #[error("word is not reduced at position {p}")]
    NotReduced { p: usize },

    #[error("not an infinite reduced word's inversion set: {0}")]
    NotInversionSet(String),

    #[error("root {0} is not a member")]
    NotMember(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
}
