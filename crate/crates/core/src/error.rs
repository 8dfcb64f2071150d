use thiserror::Error;

use crate::frontend::ParseError;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("jet order {order} exceeds the cap of {cap}")]
    JetOrderExceeded { order: usize, cap: usize },

    #[error("an even derivation is never nilpotent")]
    EvenDerivation,

    #[error("roster mismatch: {0}")]
    RosterMismatch(String),

    #[error("antifield {0} has no paired field")]
    UnpairedAntifield(String),

    #[error("derivation is not nilpotent")]
    NotNilpotent,

    #[error("derivation is not a variational symmetry of the Lagrangian")]
    NotASymmetry,

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("model `{model}` carries no {what}")]
    MissingData { model: String, what: &'static str },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
