use std::process::ExitCode;

use thiserror::Error;

/// Exit status when every check passed.
pub const EXIT_OK: u8 = 0;
/// A validation or oracle check failed; outputs were still written.
pub const EXIT_VALIDATION: u8 = 1;
/// The configuration, the flags or the parameters were rejected.
pub const EXIT_CONFIG: u8 = 2;
/// A numerical step failed (unstable system, degenerate inference, every
/// trajectory diverged, ...).
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(tcopo::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use tcopo::Error as E;
        let code = match self {
            Self::Config(_) | Self::Io { .. } => EXIT_CONFIG,
            Self::Core(E::InvalidParams(_) | E::AtThreshold { .. } | E::AsymmetricPumps(_) | E::WrongBranch { .. } | E::InvalidConfig(_)) => {
                EXIT_CONFIG
            }
            Self::Core(_) => EXIT_NUMERIC,
        };
        ExitCode::from(code)
    }
}

impl From<tcopo::Error> for CliError {
    fn from(e: tcopo::Error) -> Self {
        Self::Core(e)
    }
}
