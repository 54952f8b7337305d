//! Command-line driver: `qalb <subcommand> --config PATH [--set key=value ...] --out PATH`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::Experiment;
use crate::config::{RawConfig, Settings};
use crate::error::{CliError, EXIT_DIVERGED, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "qalb", version, about = "Lattice Boltzmann collision and streaming experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical BGK run, single site or periodic grid.
    Classical(RunArgs),
    /// Truncated-Fock collision runs compared with the classical update.
    Quantum(RunArgs),
    /// Logistic Carleman truncation errors.
    Carleman(RunArgs),
    /// Increment circuit and D2Q9 direction-register demo.
    StreamingDemo(RunArgs),
    /// Resource table.
    Complexity(RunArgs),
    /// Truncation residual, error map and feasibility margins.
    Bounds(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat `key = value` file; omitted keys take their defaults.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override one key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Primary output file. A `.meta` sidecar is written next to it.
    #[arg(long, value_name = "PATH", required_unless_present = "keys")]
    pub out: Option<PathBuf>,
    /// Print the accepted keys with defaults and exit.
    #[arg(long)]
    pub keys: bool,
}

impl Command {
    fn split(&self) -> (Experiment, &RunArgs) {
        match self {
            Command::Classical(a) => (Experiment::Classical, a),
            Command::Quantum(a) => (Experiment::Quantum, a),
            Command::Carleman(a) => (Experiment::Carleman, a),
            Command::StreamingDemo(a) => (Experiment::StreamingDemo, a),
            Command::Complexity(a) => (Experiment::Complexity, a),
            Command::Bounds(a) => (Experiment::Bounds, a),
        }
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (exp, args) = cli.command.split();
    if args.keys {
        print!("{}", commands::describe(exp));
        return EXIT_OK;
    }
    match execute(exp, args) {
        Ok(report) => {
            for n in &report.notes {
                eprintln!("note: {n}");
            }
            if report.diverged {
                EXIT_DIVERGED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(exp: Experiment, args: &RunArgs) -> Result<commands::Report, CliError> {
    let mut raw = match &args.config {
        Some(p) => RawConfig::read(p)?,
        None => RawConfig::default(),
    };
    raw.apply_overrides(&args.set)?;
    let settings = Settings::resolve(commands::schema(exp), &raw)?;
    let out = args.out.as_deref().expect("clap requires --out");
    let report = commands::execute(exp, &settings, out)?;
    let mut files = vec![out.to_path_buf()];
    files.extend(report.extra_files.iter().cloned());
    output::write_meta(out, exp.name(), &settings.echo(), &files, &report.notes)?;
    Ok(report)
}
