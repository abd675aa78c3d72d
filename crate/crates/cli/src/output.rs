//! CSV tables and the JSON run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::Failure;

/// In-memory CSV table with a mandatory header.
pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { text: format!("{}\n", header.join(",")), columns: header.len() }
    }

    /// Appends a row of numbers.
    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        let cells: Vec<String> = values.iter().map(|&v| cell(v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn row_labelled(&mut self, label: &str, values: &[f64]) {
        debug_assert_eq!(values.len() + 1, self.columns);
        let cells: Vec<String> = values.iter().map(|&v| cell(v)).collect();
        let _ = writeln!(self.text, "{label},{}", cells.join(","));
    }
}

/// Shortest round-trip form, in exponent notation for very small or large magnitudes.
fn cell(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_path: &'a str,
    seed: u64,
    output_paths: Vec<String>,
    tool_version: &'a str,
    timestamp: String,
    results: Map<String, Value>,
    warnings: &'a [String],
}

/// Everything a command reports besides its table.
pub struct RunReport {
    pub seed: u64,
    pub results: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(seed: u64) -> Self {
        RunReport { seed, results: Map::new(), warnings: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the current time, as RFC 3339.
fn timestamp() -> Result<String, Failure> {
    let moment = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(raw) => {
            let secs: i64 = raw
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("SOURCE_DATE_EPOCH must be an integer, got {raw:?}")))?;
            OffsetDateTime::from_unix_timestamp(secs)
                .map_err(|e| Failure::Usage(format!("SOURCE_DATE_EPOCH out of range: {e}")))?
        }
        Err(_) => OffsetDateTime::now_utc(),
    };
    moment.format(&Rfc3339).map_err(|e| Failure::Internal(format!("cannot format timestamp: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes `<command>.csv` and `<command>.manifest.json` into `out_dir`.
pub fn emit(
    out_dir: &Path,
    command: &str,
    config_path: &str,
    table: &Table,
    report: &RunReport,
) -> Result<PathBuf, Failure> {
    fs::create_dir_all(out_dir).map_err(|e| Failure::Usage(format!("{}: {e}", out_dir.display())))?;
    let csv = out_dir.join(format!("{command}.csv"));
    write_file(&csv, &table.text)?;
    let manifest = Manifest {
        command,
        config_path,
        seed: report.seed,
        output_paths: vec![csv.display().to_string()],
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp: timestamp()?,
        results: report.results.clone(),
        warnings: &report.warnings,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Failure::Internal(format!("cannot serialise manifest: {e}")))?;
    let path = out_dir.join(format!("{command}.manifest.json"));
    write_file(&path, &(json + "\n"))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(path)
}
