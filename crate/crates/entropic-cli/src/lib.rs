//! Command-line front end: experiment runs, convergence studies and flux
//! condition checks.

pub mod commands;
pub mod config;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("condition violated: {0}")]
    Violation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl From<entropic::Error> for CliError {
    fn from(e: entropic::Error) -> Self {
        use entropic::Error::*;
        match e {
            NonFinite { .. } | InadmissibleState(_) => CliError::Numerical(e.to_string()),
            InvalidParameter(_) | DegenerateMesh { .. } | MissingIngredient(_) => CliError::Config(e.to_string()),
        }
    }
}
