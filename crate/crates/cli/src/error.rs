use mdframe_core::MdError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag values.
    #[error("usage: {0}")]
    Usage(String),
    /// The inputs are well formed but fail a mathematical precondition.
    #[error("rejected: {0}")]
    Rejected(String),
    /// A file is malformed or files are incompatible.
    #[error("data: {0}")]
    Data(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Rejected(_) => EXIT_REJECTED,
            CliError::Data(_) | CliError::Io(_) => EXIT_DATA,
        }
    }
}

impl From<MdError> for CliError {
    fn from(e: MdError) -> Self {
        match e {
            MdError::NotAFrame { .. }
            | MdError::SymbolZero { .. }
            | MdError::UnitSumViolation { .. }
            | MdError::PartitionViolation { .. }
            | MdError::LowerBoundFailure { .. } => CliError::Rejected(e.to_string()),
            MdError::Dimension(_) | MdError::Aliasing { .. } => CliError::Data(e.to_string()),
            MdError::InvalidBase(_)
            | MdError::InvalidWindow { .. }
            | MdError::InvalidGrid { .. }
            | MdError::Domain(_) => CliError::Usage(e.to_string()),
        }
    }
}
