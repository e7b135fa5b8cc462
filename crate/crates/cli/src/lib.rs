//! Command-line runner for the stochastic-gravitation simulation core.
//!
//! ```text
//! stochgrav <subcommand> [--config PATH] [--seed N] [--workers N]
//!           [--output PATH] [--format csv|json] [key=value ...]
//! ```
//!
//! Exit codes: 0 success, 1 a check or bound failed, 2 bad input.

use std::ffi::OsString;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub mod commands;
pub mod config;
pub mod exec;
pub mod io;

use config::{RawConfig, Settings};
use exec::Threaded;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<stochgrav_core::Error> for CliError {
    fn from(e: stochgrav_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Background,
    Deviate,
    Twoslit,
    Bell,
    Geometry,
    Report,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::Background => "background",
            Subcommand::Deviate => "deviate",
            Subcommand::Twoslit => "twoslit",
            Subcommand::Bell => "bell",
            Subcommand::Geometry => "geometry",
            Subcommand::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "stochgrav", version, about = "Seeded experiments on a stochastic gravitational background")]
pub struct Cli {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// File of key=value lines
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// key=value overrides
    #[arg(value_name = "KEY=VALUE")]
    pub pairs: Vec<String>,
}

/// Everything a subcommand needs once its configuration is resolved.
pub struct Run<'a> {
    pub command: Subcommand,
    pub settings: Settings,
    pub exec: Threaded,
    pub output: Option<PathBuf>,
    pub out: &'a mut dyn Write,
}

impl Run<'_> {
    pub fn output_or(&self, default: &str) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from(default))
    }
}

fn raw_config(cli: &Cli) -> Result<RawConfig, CliError> {
    let mut raw = match &cli.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    raw.apply_pairs(&cli.pairs)?;
    if let Some(seed) = cli.seed {
        raw.set("seed", seed.to_string());
    }
    if let Some(f) = cli.format {
        raw.set("format", if f == Format::Csv { "csv" } else { "json" }.into());
    }
    Ok(raw)
}

fn workers(cli: &Cli, raw: &RawConfig) -> Result<Threaded, CliError> {
    let n = match (cli.workers, raw.get("workers")) {
        (Some(n), _) => n,
        (None, Some(s)) => s.parse().map_err(|_| CliError::Config(format!("workers: '{s}' is not a count")))?,
        (None, None) => 1,
    };
    NonZeroUsize::new(n)
        .map(Threaded::new)
        .ok_or_else(|| CliError::Config("workers must be >= 1".into()))
}

/// Parses `args` (program name first), runs the subcommand and writes its
/// console report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}")?;
                return Ok(());
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return Err(CliError::Config(line.to_string()));
        }
    };
    let raw = raw_config(&cli)?;
    let exec = workers(&cli, &raw)?;
    let output = cli.output.clone().or_else(|| raw.get("output").filter(|s| !s.is_empty()).map(PathBuf::from));
    let keys = commands::keys(cli.subcommand);
    let settings = raw.resolve(cli.subcommand.name(), keys)?;
    let mut run = Run { command: cli.subcommand, settings, exec, output, out };
    commands::dispatch(&mut run)
}
