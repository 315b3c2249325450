//! Tabular and JSON forms of every subcommand's output.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::settings::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(&'static str),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.to_string(),
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// JSON number carrying the same 17-digit text as the CSV; `null` when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(float(x).parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

pub fn nums(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}

/// Object with keys in insertion order.
pub fn object<const N: usize>(fields: [(&str, Value); N]) -> Value {
    Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub json: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(csv_error)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::render)).map_err(csv_error)?;
                }
                w.into_inner().map_err(|e| CliError::Io { path: "<buffer>".into(), source: e.into_error() })
            }
            Format::Json => {
                let mut buf = serde_json::to_vec_pretty(&self.json).expect("JSON values always serialize");
                buf.push(b'\n');
                Ok(buf)
            }
        }
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io { path: "<buffer>".into(), source: std::io::Error::other(e) }
}

/// Writes the rendered report to `path`, or to standard output.
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = report.render(format)?;
    match path {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| CliError::Io { path: p.display().to_string(), source: e }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
        }
    }
}
