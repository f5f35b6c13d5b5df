use std::process::ExitCode;

use teleport_core::Error as CoreError;

/// Failure modes of a CLI run, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("infeasible spectrum: p_max = {p_max} exceeds 1/{d}")]
    Infeasible { p_max: f64, d: usize },
    #[error("no phase factors found (best residual {best_residual:e})")]
    PhasesNotFound { best_residual: f64 },
    #[error("verification failed:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Verification(Vec<String>),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Parse(_) => 2,
            Self::Input(_) => 3,
            Self::Infeasible { .. } => 4,
            Self::PhasesNotFound { .. } => 5,
            Self::Verification(_) => 6,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InfeasibleSpectrum { p_max, d } => Self::Infeasible { p_max, d },
            CoreError::PhaseFactorsNotFound { best_residual } => Self::PhasesNotFound { best_residual },
            other => Self::Input(other.to_string()),
        }
    }
}
