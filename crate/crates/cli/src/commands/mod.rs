//! Subcommand schemas and runners.

mod bounds;
mod carleman;
mod classical;
mod complexity;
mod quantum;
mod streaming;

use std::path::{Path, PathBuf};

use qalb_core::lattice::{build_lattice, LatticeKind, LatticeModel};

use crate::config::{ConfigError, KeySpec, Settings};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Classical,
    Quantum,
    Carleman,
    StreamingDemo,
    Complexity,
    Bounds,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Classical => "classical",
            Experiment::Quantum => "quantum",
            Experiment::Carleman => "carleman",
            Experiment::StreamingDemo => "streaming-demo",
            Experiment::Complexity => "complexity",
            Experiment::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    /// Files written besides the primary output.
    pub extra_files: Vec<PathBuf>,
    pub notes: Vec<String>,
    /// A divergence was detected; the data was still written.
    pub diverged: bool,
}

pub fn schema(exp: Experiment) -> &'static [KeySpec] {
    match exp {
        Experiment::Classical => classical::SCHEMA,
        Experiment::Quantum => quantum::SCHEMA,
        Experiment::Carleman => carleman::SCHEMA,
        Experiment::StreamingDemo => streaming::SCHEMA,
        Experiment::Complexity => complexity::SCHEMA,
        Experiment::Bounds => bounds::SCHEMA,
    }
}

/// Accepted keys, one per line: `key = default  # help`.
pub fn describe(exp: Experiment) -> String {
    schema(exp)
        .iter()
        .map(|k| format!("{} = {}  # {}\n", k.key, k.default, k.help))
        .collect()
}

pub fn execute(exp: Experiment, s: &Settings, out: &Path) -> Result<Report, CliError> {
    match exp {
        Experiment::Classical => classical::run(s, out),
        Experiment::Quantum => quantum::run(s, out),
        Experiment::Carleman => carleman::run(s, out),
        Experiment::StreamingDemo => streaming::run(s, out),
        Experiment::Complexity => complexity::run(s, out),
        Experiment::Bounds => bounds::run(s, out),
    }
}

/// Initial distribution used by the single-site figure runs.
pub const D1Q3_FIGURE: [f64; 3] = [2.0 / 3.0, 1.0 / 12.0, 0.25];

fn lattice(s: &Settings) -> Result<LatticeModel<f64>, ConfigError> {
    let kind: LatticeKind = s
        .raw("lattice")
        .parse()
        .map_err(|e: qalb_core::Error| s.invalid("lattice", e.to_string()))?;
    Ok(build_lattice(kind))
}

/// `f0`: `d1q3-figure`, `equilibrium` (the rest weights) or an explicit list.
fn initial_distribution(s: &Settings, m: &LatticeModel<f64>) -> Result<Vec<f64>, ConfigError> {
    let f = match s.raw("f0") {
        "d1q3-figure" if m.kind == LatticeKind::D1Q3 => D1Q3_FIGURE.to_vec(),
        "d1q3-figure" => return Err(s.invalid("f0", "preset is defined for D1Q3 only")),
        "equilibrium" => m.weights.clone(),
        _ => s.list("f0")?,
    };
    if f.len() != m.q {
        return Err(s.invalid("f0", format!("{} lattice needs {} values, got {}", m.kind, m.q, f.len())));
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(s.invalid("f0", "values must be finite"));
    }
    Ok(f)
}

/// `8` or `4x4`; empty means a single site.
fn grid_dims(s: &Settings, key: &str) -> Result<Vec<usize>, ConfigError> {
    let raw = s.raw(key);
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split('x')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(s.invalid(key, "expected site counts like 8 or 4x4")),
        })
        .collect()
}
