use std::fmt;

use catdyn::ErrorKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Core(catdyn::Error),
    /// Unreadable file or malformed JSON.
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_PARSE,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Parse => EXIT_PARSE,
                ErrorKind::Domain => EXIT_DOMAIN,
                ErrorKind::Internal => EXIT_INTERNAL,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => write!(f, "input error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<catdyn::Error> for CliError {
    fn from(e: catdyn::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
