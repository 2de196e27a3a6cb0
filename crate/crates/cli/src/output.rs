//! Result files: CSV tables or JSON, each carrying a header with the config
//! echo, seed and version.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use usbp_core::timeint::{write_diagnostics, DiagnosticSample};
use usbp_core::{Error, Result};

use crate::config::ExperimentConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Csv(Table),
    Json(Value),
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub body: Body,
    /// Scalar results echoed in the header.
    pub summary: Value,
    /// Time series of integrated runs, keyed by a short tag.
    pub diagnostics: Vec<(String, Vec<DiagnosticSample>)>,
}

pub fn header(cfg: &ExperimentConfig, summary: &Value) -> Value {
    json!({
        "config": cfg,
        "seed": cfg.seed,
        "version": VERSION,
        "summary": summary,
    })
}

pub fn real(x: f64) -> String {
    format!("{x:e}")
}

/// Text of the main output file.
pub fn render(cfg: &ExperimentConfig, out: &RunOutput) -> Result<String> {
    let head = header(cfg, &out.summary);
    match &out.body {
        Body::Csv(table) => {
            let mut buf = format!("#{head}\n").into_bytes();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(&table.columns).map_err(csv_err)?;
                for row in &table.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                w.flush()?;
            }
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Body::Json(v) => {
            let mut v = v.clone();
            if let Value::Object(map) = &mut v {
                map.insert("meta".into(), head);
            }
            Ok(serde_json::to_string_pretty(&v)? + "\n")
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Path of the diagnostics file for `tag` next to `out`.
pub fn diagnostics_path(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    out.with_file_name(format!("{stem}.{tag}.diagnostics.csv"))
}

/// Write the main output to `cfg.out` (or `stdout`) and, with an output
/// path, one diagnostics file per integrated run.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    out: &RunOutput,
    stdout: &mut dyn Write,
) -> Result<()> {
    let text = render(cfg, out)?;
    let Some(path) = &cfg.out else {
        stdout.write_all(text.as_bytes())?;
        return Ok(());
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    for (tag, samples) in &out.diagnostics {
        let mut buf = format!("#{}\n", header(cfg, &json!({ "run": tag }))).into_bytes();
        write_diagnostics(samples, &mut buf)?;
        fs::write(diagnostics_path(path, tag), buf)?;
    }
    Ok(())
}
