use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what}: requested {requested} exceeds the configured bound {limit}")]
    BoundExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("average over an empty set of tableaux")]
    EmptySet,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid Dyck word: {0}")]
    InvalidDyckWord(String),

    #[error("{items} items cannot be split into triples (size must be divisible by 3; free C3 orbits need n >= 2)")]
    NotDivisibleByThree { items: usize },

    #[error("partition does not cover the item set: {0}")]
    Coverage(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
