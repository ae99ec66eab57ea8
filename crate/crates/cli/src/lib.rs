//! Command implementations behind the `chaosig` binary.

pub mod args;
pub mod commands;
pub mod config;
pub mod reference;
pub mod reproduce;

use std::fmt;

/// Exit status for invalid flags, configuration or input files.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for numerical failures (overflow, singular derivative, failed checks).
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit status when training diverges.
pub const EXIT_DIVERGENCE: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }

    /// Wraps a library error, prefixing the flag it came from.
    pub fn flag(flag: &str, err: chaosig::Error) -> Self {
        let mut e = CliError::from(err);
        e.message = format!("{flag}: {}", e.message);
        e
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<chaosig::Error> for CliError {
    fn from(err: chaosig::Error) -> Self {
        let code = if err.is_divergence() {
            EXIT_DIVERGENCE
        } else if err.is_validation() {
            EXIT_VALIDATION
        } else {
            EXIT_NUMERICAL
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Writes one line to stdout. A closed pipe (e.g. `| head`) ends the process quietly.
pub fn emit(line: fmt::Arguments<'_>) {
    use std::io::Write;
    if let Err(e) = writeln!(std::io::stdout().lock(), "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

/// `println!` through [`emit`].
#[macro_export]
macro_rules! out {
    ($($arg:tt)*) => {
        $crate::emit(format_args!($($arg)*))
    };
}
