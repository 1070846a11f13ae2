//! The `thurston` command line.

pub mod args;
pub mod commands;
pub mod output;
pub mod suite;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;
use thurston_core::covering::{canned, validate_spec};
use thurston_core::{CoveringSpec, EngineError, Error as CoreError, FormatError, MatrixError, SpecError};

pub use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("acceptance failures: {}", .0.join(", "))]
    Acceptance(Vec<String>),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Engine(EngineError::Degenerate(_) | EngineError::Inconsistent { .. })
                | CoreError::Matrix(MatrixError::NoConvergence { .. } | MatrixError::PowerCapExceeded { .. }) => 3,
                _ => 2,
            },
            CliError::Acceptance(_) => 4,
        }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        })*
    };
}

from_core!(EngineError, MatrixError, SpecError, FormatError);

pub type Result<T> = std::result::Result<T, CliError>;

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Loads a spec from a file, or by canned name when no such file exists, and validates it.
pub fn resolve_spec(name_or_path: &str) -> Result<CoveringSpec> {
    let path = Path::new(name_or_path);
    let spec = if path.is_file() {
        CoveringSpec::from_json(&read_to_string(path)?).map_err(|e| CliError::Validation(format!("{name_or_path}: {e}")))?
    } else {
        canned(name_or_path).map_err(|e| CliError::Validation(e.to_string()))?
    };
    let violations = validate_spec(&spec);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(CliError::Validation(format!(
            "spec {} is invalid:\n{}",
            spec.name,
            lines.join("\n")
        )));
    }
    Ok(spec)
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(&a),
        Command::Run(a) => commands::run(&a),
        Command::Extract(a) => commands::extract(&a),
        Command::Suite(a) => suite::cmd_suite(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
