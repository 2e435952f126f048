//! Output envelope and JSON/CSV rendering.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub results: Value,
    pub format_version: &'static str,
}

impl Envelope {
    pub fn new(command: &'static str, params: Map<String, Value>, results: Value) -> Self {
        Self { command, params, results, format_version: "1" }
    }
}

pub fn emit(env: &Envelope, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, env)?;
            writeln!(out)
        }
        Format::Csv => write_csv(&env.results, out),
    }
}

/// One record per array element (or a single record for an object); nested
/// arrays are joined with `;`.
fn write_csv(results: &Value, out: &mut impl Write) -> std::io::Result<()> {
    let records: Vec<&Map<String, Value>> = match results {
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        Value::Object(obj) => match obj.get("rows") {
            Some(Value::Array(rows)) => rows.iter().filter_map(Value::as_object).collect(),
            _ => vec![obj],
        },
        _ => Vec::new(),
    };
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = records.first() {
        w.write_record(first.keys())?;
    }
    for rec in records {
        w.write_record(rec.values().map(cell))?;
    }
    w.flush()
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
