use thiserror::Error;

use tfu_core::ctp::CtpError;
use tfu_core::inequality::LabError;
use tfu_core::logic::LogicError;
use tfu_core::measure::MeasureError;
use tfu_core::quantum::QuantumError;

/// Errors surfaced by the command line, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("undefined quantity `{label}`: {message}")]
    Undefined { label: String, message: String },
    #[error("{failed} propert{} failed", if *.failed == 1 { "y" } else { "ies" })]
    PropertyFailure { failed: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Validation { field: field.into(), message: message.to_string() }
    }

    pub fn undefined(label: impl Into<String>, message: impl ToString) -> Self {
        CliError::Undefined { label: label.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::PropertyFailure { .. } => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Validation { .. } => 3,
            CliError::Undefined { .. } => 4,
        }
    }
}

/// Sorts a computation error into validation or undefined-quantity.
pub(crate) fn classify(label: &str, field: &str, err: impl Into<ComputeError>) -> CliError {
    match err.into() {
        ComputeError::Undefined(msg) => CliError::undefined(label, msg),
        ComputeError::Invalid(msg) => CliError::validation(field, msg),
    }
}

pub(crate) enum ComputeError {
    Undefined(String),
    Invalid(String),
}

impl From<CtpError> for ComputeError {
    fn from(e: CtpError) -> Self {
        match e {
            CtpError::NullCondition(_) | CtpError::ZeroVector => ComputeError::Undefined(e.to_string()),
            other => ComputeError::Invalid(other.to_string()),
        }
    }
}

impl From<MeasureError> for ComputeError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::EverywhereUndecidable(_) | MeasureError::UndefinedConditional { .. } => {
                ComputeError::Undefined(e.to_string())
            }
            other => ComputeError::Invalid(other.to_string()),
        }
    }
}

impl From<QuantumError> for ComputeError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::NullCondition(_) => ComputeError::Undefined(e.to_string()),
            other => ComputeError::Invalid(other.to_string()),
        }
    }
}

impl From<LogicError> for ComputeError {
    fn from(e: LogicError) -> Self {
        ComputeError::Invalid(e.to_string())
    }
}

impl From<LabError> for ComputeError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Classical(c) => c.into(),
            LabError::Quantum(q) => q.into(),
            other => ComputeError::Invalid(other.to_string()),
        }
    }
}
