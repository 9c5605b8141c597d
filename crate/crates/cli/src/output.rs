//! CSV and JSON emission. All output is assembled in memory, deterministic,
//! dot-decimal, and written by a single writer at the end.

use std::io::Write;
use std::path::PathBuf;

use jenfi::experiments::SweepTable;
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub format: Format,
    pub destination: Option<PathBuf>,
    pub precision: usize,
}

impl OutputConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(4..=17).contains(&self.precision) {
            return Err(CliError::Validation(format!(
                "precision must be in [4, 17], got {}",
                self.precision
            )));
        }
        Ok(())
    }

    pub fn write(&self, content: &str) -> Result<(), CliError> {
        match &self.destination {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(content.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string()))
            }
            Some(path) => std::fs::write(path, content).map_err(|e| {
                CliError::Io(format!("cannot write {}: {e}", path.display()))
            }),
        }
    }
}

/// RFC4180 quoting for fields that contain separators (the fig7 series
/// labels have commas in them).
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `inf` for divergent values, scientific notation otherwise.
fn fmt_value(v: f64, precision: usize) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{:.*e}", precision, v)
    }
}

/// Index entries are printed as plain integers when they are integers
/// (quantum numbers), scientifically otherwise (beta grids).
fn fmt_index(v: f64, precision: usize) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        fmt_value(v, precision)
    }
}

/// One output row of a divergence/info/debruijn command.
pub struct MeasureRow {
    pub measure: String,
    /// `None` encodes a divergent value.
    pub value: Option<f64>,
    pub error_estimate: Option<f64>,
    pub status: &'static str,
}

pub fn render_measures(
    rows: &[MeasureRow],
    metadata: &[(&str, String)],
    out: &OutputConfig,
) -> String {
    match out.format {
        Format::Csv => {
            let mut s = String::from("measure,value,error_estimate,status\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.measure,
                    r.value.map_or("inf".into(), |v| fmt_value(v, out.precision)),
                    r.error_estimate
                        .map_or("inf".into(), |v| fmt_value(v, out.precision)),
                    r.status
                ));
            }
            s
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "measure": r.measure,
                        "value": r.value,
                        "error_estimate": r.error_estimate,
                        "status": r.status,
                    })
                })
                .collect();
            let meta: Map<String, Value> = metadata
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                .collect();
            let doc = json!({ "metadata": meta, "records": records });
            format!("{:#}\n", doc)
        }
    }
}

pub fn render_sweep(
    table: &SweepTable,
    figure: &str,
    extra_metadata: &[(&str, String)],
    out: &OutputConfig,
) -> String {
    let with_series = table.has_series();
    match out.format {
        Format::Csv => {
            let mut header: Vec<String> = Vec::new();
            if with_series {
                header.push("series".into());
            }
            header.extend(table.index_columns.iter().cloned());
            header.extend(["jsd", "jfd", "jsd_err", "jfd_err"].map(String::from));
            let mut s = header.join(",");
            s.push('\n');
            for r in &table.records {
                let mut fields: Vec<String> = Vec::new();
                if with_series {
                    fields.push(csv_field(r.series.as_deref().unwrap_or_default()));
                }
                for v in &r.index {
                    fields.push(fmt_index(*v, out.precision));
                }
                for v in [r.jsd, r.jfd, r.jsd_err, r.jfd_err] {
                    fields.push(fmt_value(v, out.precision));
                }
                s.push_str(&fields.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let records: Vec<Value> = table
                .records
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    if with_series {
                        m.insert("series".into(), json!(r.series));
                    }
                    for (name, v) in table.index_columns.iter().zip(&r.index) {
                        m.insert(name.clone(), json!(v));
                    }
                    m.insert("jsd".into(), json!(r.jsd));
                    m.insert("jfd".into(), json!(r.jfd));
                    m.insert("jsd_err".into(), json!(r.jsd_err));
                    m.insert("jfd_err".into(), json!(r.jfd_err));
                    Value::Object(m)
                })
                .collect();
            let mut meta = Map::new();
            meta.insert("figure".into(), json!(figure));
            meta.insert("family".into(), json!(table.family));
            meta.insert("reference".into(), json!(table.reference));
            meta.insert("timestamp".into(), json!(table.timestamp));
            for (k, v) in extra_metadata {
                meta.insert(k.to_string(), json!(v));
            }
            let doc = json!({ "metadata": meta, "records": records });
            format!("{:#}\n", doc)
        }
    }
}
