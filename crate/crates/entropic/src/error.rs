use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inadmissible state: {0}")]
    InadmissibleState(String),
    #[error("non-finite value in solution at t = {t}")]
    NonFinite { t: f64 },
    #[error("mesh has non-positive Jacobian {jacobian:e} in element {element}")]
    DegenerateMesh { element: usize, jacobian: f64 },
    #[error("missing flux ingredient: {0}")]
    MissingIngredient(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
