use thiserror::Error;

use crate::lattice::Coord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("product has an imaginary phase")]
    ImaginaryPhase,

    #[error("site {0} has no index")]
    UnindexedSite(Coord),

    #[error("transport failure: {0}")]
    Transport(String),

    #[error("classification failure: {0}")]
    Classification(String),

    #[error("elimination failure at pivot {pivot}: {reason}")]
    Elimination { pivot: usize, reason: String },

    #[error("register of {0} qubits exceeds the state-vector cap")]
    TooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
