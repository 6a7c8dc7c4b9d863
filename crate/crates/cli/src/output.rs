//! Report emission. JSON documents carry the metadata block inline; CSV
//! files hold header and rows only, with the metadata in `<out>.meta.json`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "nimkerr";

/// One CSV cell: floats always get 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) if v.is_nan() => "NaN".to_string(),
            Cell::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub preset: String,
    pub seed: u64,
    pub omega0: Option<f64>,
    pub config: RunConfig,
}

impl Metadata {
    pub fn new(command: &'static str, config: &RunConfig, omega0: Option<f64>) -> Self {
        Metadata {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            preset: config.preset.clone(),
            seed: config.seed,
            omega0,
            config: config.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub metadata: Metadata,
    pub result: Value,
    pub table: Table,
}

impl Report {
    pub fn json_document(&self) -> Value {
        json!({ "metadata": self.metadata, "result": self.result })
    }

    pub fn render_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(&self.json_document()).map_err(|e| CliError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn render_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.table.header).map_err(|e| CliError::Output(e.to_string()))?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(|e| CliError::Output(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn render_metadata(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(&self.metadata).map_err(|e| CliError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the report to `out` (or `stdout` when there is no path).
pub fn emit(report: &Report, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let payload = match format {
        Format::Json => report.render_json()?,
        Format::Csv => report.render_csv()?,
    };
    match out {
        Some(path) => {
            std::fs::write(path, payload.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if format == Format::Csv {
                let meta = sidecar_path(path);
                std::fs::write(&meta, report.render_metadata()?)
                    .map_err(|e| CliError::Io(format!("{}: {e}", meta.display())))?;
            }
        }
        None => stdout.write_all(payload.as_bytes())?,
    }
    Ok(())
}
