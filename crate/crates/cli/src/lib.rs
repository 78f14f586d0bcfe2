//! Batch front end: problem files in, reports out.

pub mod problem;
pub mod recheck;
pub mod report;
pub mod run;

pub use problem::ProblemFile;
pub use run::{run, Command, Outcome};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Malformed or inconsistent input (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// A theorem hypothesis is not met (exit 1, with a report).
    #[error("hypothesis unmet: {0}")]
    Hypothesis(String),
    /// A computed certificate failed its own check (exit 3).
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Hypothesis(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<folcris_core::Error> for CliError {
    fn from(e: folcris_core::Error) -> CliError {
        use folcris_core::Error as E;
        match e {
            E::HypothesisUnmet(_) | E::NotTransversallySmooth(_) | E::SmallCharacteristic { .. } => {
                CliError::Hypothesis(e.to_string())
            }
            E::InternalConsistency(_) | E::TruncationNotSubcomplex(_) | E::ComplexNotValid(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
