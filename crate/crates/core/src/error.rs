use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed vector: {0}")]
    Malformed(String),

    #[error("invalid spacing: {0}")]
    InvalidSpacing(String),

    #[error("order {order} is not admissible for a Steiner triple system ({order} mod 6 = {residue}; need 1 or 3)")]
    NotAdmissible { order: u64, residue: u64 },

    #[error("no witness found in range: {0}")]
    NoWitnessInRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
