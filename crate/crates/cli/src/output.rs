//! CSV tables and the metadata sidecar.
//!
//! Floats are written with 17 significant digits in scientific notation.

use std::io::Write;
use std::path::{Path, PathBuf};

pub const ARTIFACT_VERSION: &str = concat!("qalb-cli ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// `d.dddddddddddddddde±x`, or `NaN`/`inf`/`-inf`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b',')
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }
}

/// `out.csv` plus `tag` gives `out.tag.csv`.
pub fn sibling(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}.{tag}.{ext}"))
}

/// `out.csv` gives `out.csv.meta`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Sidecar: header comments, the resolved config (a valid config file on
/// its own), then `# note:` lines.
pub fn write_meta(
    out: &Path,
    subcommand: &str,
    config_echo: &str,
    files: &[PathBuf],
    notes: &[String],
) -> std::io::Result<PathBuf> {
    let path = meta_path(out);
    let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
    writeln!(f, "# artifact: {ARTIFACT_VERSION}")?;
    writeln!(f, "# subcommand: {subcommand}")?;
    for file in files {
        let name = file.file_name().map(|n| n.to_string_lossy()).unwrap_or_default();
        writeln!(f, "# output: {name}")?;
    }
    f.write_all(config_echo.as_bytes())?;
    for n in notes {
        writeln!(f, "# note: {n}")?;
    }
    f.flush()?;
    Ok(path)
}
