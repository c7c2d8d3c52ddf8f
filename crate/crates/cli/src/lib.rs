//! Library side of the `qes` binary, kept separate so tests can drive it
//! without spawning processes.

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;

pub use config::{Job, JobArgs, JobConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_MODEL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "qes",
    version,
    about = "Quasi-exactly solvable potentials from a rational generator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: JobArgs,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Classify the generator and predict the two level indices.
    Analyze,
    /// Build the superpotentials and partner potentials exactly.
    Construct,
    /// Check the prediction against a numerical spectrum.
    Spectrum,
    /// Write potential and wavefunction grids as CSV.
    Export,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Construct => "construct",
            Command::Spectrum => "spectrum",
            Command::Export => "export",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(anyhow::Error),
    Model(anyhow::Error),
    Verification(anyhow::Error),
    Io(anyhow::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Model(_) => EXIT_MODEL,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            CliError::Config(e)
            | CliError::Model(e)
            | CliError::Verification(e)
            | CliError::Io(e) => e,
        }
    }
}

/// Result of one invocation: exit code, report for stdout, note for stderr.
#[derive(Debug)]
pub struct Output {
    pub code: i32,
    pub report: String,
    pub message: Option<String>,
}

impl Output {
    pub fn ok(report: String) -> Self {
        Self {
            code: EXIT_OK,
            report,
            message: None,
        }
    }

    fn failed(err: CliError) -> Self {
        Self {
            code: err.code(),
            report: String::new(),
            message: Some(format!("error: {:#}", err.error())),
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    let job = match Job::resolve(&cli.args) {
        Ok(job) => job,
        Err(e) => return Output::failed(CliError::Config(e)),
    };
    let result = match cli.command {
        Command::Analyze => commands::analyze(&job),
        Command::Construct => commands::construct(&job),
        Command::Spectrum => commands::spectrum(&job),
        Command::Export => commands::export(&job),
    };
    result.unwrap_or_else(Output::failed)
}

/// Parses `argv` and runs it; usage errors map to the config exit code.
pub fn run_from<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => Output {
            code: if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK },
            report: if e.use_stderr() {
                String::new()
            } else {
                e.to_string()
            },
            message: e.use_stderr().then(|| e.to_string()),
        },
    }
}
