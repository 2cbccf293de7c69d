//! Command-line front end for `turan-core`: zero listings, bound sweeps,
//! verification suites and condition tables.
//!
//! [`run`] executes one invocation and returns its exit code and output, so
//! the binary is a thin wrapper and commands are testable in-process.

pub mod commands;
pub mod family;
pub mod format;

use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const SOUNDNESS: i32 = 4;
    pub const COUNTEREXAMPLE: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] turan_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use turan_core::Error as E;
        match self {
            CliError::Input(_) => exit::INPUT,
            CliError::Core(E::ZeroOfP { .. } | E::Bracket(_) | E::ZeroVector) => exit::SOLVER,
            CliError::Core(_) => exit::INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Inequalities,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "turan-zeros", version, about = "Extreme zeros of orthogonal polynomials and Turán-type bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print all zeros of p_k.
    Zeros {
        /// Builtin name (`name[:key=value,...]`), inline JSON, or a JSON file.
        family: String,
        k: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Compare x_kk with every bound over a degree or range `a..b`.
    Bounds {
        family: String,
        /// A degree or an inclusive range `a..b`.
        k: String,
        /// Comma-separated subset of output columns.
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run identity and inequality verification suites.
    Verify {
        family: String,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        kmax: usize,
        /// Random points per degree for identities.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Grid points per degree for inequalities.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Tabulate every hypothesis condition for the family.
    Check {
        family: String,
        #[arg(long, default_value_t = 40)]
        kmax: usize,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Builtin families.
    Families {
        #[command(subcommand)]
        action: FamiliesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamiliesAction {
    /// Print each builtin name with its JSON expansion.
    List {
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome {
            code: exit::OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let text = e.render().to_string();
            return if code == exit::OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use turan_core::Error;

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(CliError::Input("x".into()).exit_code(), exit::INPUT);
        assert_eq!(CliError::Core(Error::UnknownFamily("x".into())).exit_code(), exit::INPUT);
        assert_eq!(CliError::Core(Error::CapacityExceeded { index: 9, last: 3 }).exit_code(), exit::INPUT);
        assert_eq!(CliError::Core(Error::Bracket("x".into())).exit_code(), exit::SOLVER);
        assert_eq!(CliError::Core(Error::ZeroOfP { k: 2, x: 0.0 }).exit_code(), exit::SOLVER);
        assert_eq!(CliError::Core(Error::ZeroVector).exit_code(), exit::SOLVER);
    }

    #[test]
    fn help_and_version_exit_zero() {
        let o = run(["turan-zeros", "--help"]);
        assert_eq!(o.code, exit::OK);
        assert!(o.stdout.contains("bounds"));
        let o = run(["turan-zeros", "frobnicate"]);
        assert_eq!(o.code, exit::INPUT);
    }
}
