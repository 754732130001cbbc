use std::fmt;

use thiserror::Error;

/// Exit status of a subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Config = 2,
    Physics = 3,
    Verification = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Location of a configuration problem.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Location {
    pub line: Option<usize>,
    pub key: Option<String>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.key) {
            (Some(l), Some(k)) => write!(f, "line {l}, key `{k}`: "),
            (Some(l), None) => write!(f, "line {l}: "),
            (None, Some(k)) => write!(f, "key `{k}`: "),
            (None, None) => Ok(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {at}{message}")]
    Config { at: Location, message: String },

    #[error("physics error: {0}")]
    Physics(thermoduet::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config { at: Location::default(), message: message.into() }
    }

    pub fn at(line: usize, key: Option<&str>, message: impl Into<String>) -> Self {
        CliError::Config { at: Location { line: Some(line), key: key.map(str::to_owned) }, message: message.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => ExitStatus::Config,
            CliError::Physics(_) => ExitStatus::Physics,
            CliError::Verification(_) => ExitStatus::Verification,
        }
    }
}

impl From<thermoduet::Error> for CliError {
    fn from(e: thermoduet::Error) -> Self {
        if e.is_physics() {
            CliError::Physics(e)
        } else {
            CliError::config(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
