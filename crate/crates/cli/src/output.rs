//! Report sinks: JSON objects, JSON lines and CSV with a stable header.

use crate::args::Format;
use crate::error::CliError;
use serde::Serialize;
use serde_json::Value;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use walkarith_core::AuditRow;

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

/// Flattens nested objects to `outer_inner` keys; arrays become `;`-joined cells.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}_{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(xs) => {
                let cells: Vec<String> = xs.iter().map(cell).collect();
                out.push((prefix.to_string(), cells.join(";")));
            }
            other => out.push((prefix.to_string(), cell(other))),
        }
    }
    fn cell(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

/// Writes records of one shape: a CSV header and rows, or one JSON value per line.
pub fn write_records<T: Serialize>(out: &mut dyn Write, format: Format, records: &[T]) -> Result<(), CliError> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for (i, r) in records.iter().enumerate() {
                let flat = flatten(&serde_json::to_value(r)?);
                if i == 0 {
                    w.write_record(flat.iter().map(|(k, _)| k))?;
                }
                w.write_record(flat.iter().map(|(_, v)| v))?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Audit rows: fixed leading columns then audit-specific extras.
pub fn write_rows(out: &mut dyn Write, format: Format, rows: &[AuditRow]) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            if let Some(first) = rows.first() {
                w.write_record(first.header())?;
            }
            for r in rows {
                w.write_record(r.record())?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in rows {
                let mut m = serde_json::Map::new();
                for (k, v) in r.header().into_iter().zip(r.record()) {
                    let val = match v.parse::<f64>() {
                        Ok(x) if x.is_finite() && k != "argmax_flag" => serde_json::json!(x),
                        _ if k == "argmax_flag" => Value::Bool(r.argmax_flag),
                        _ => Value::String(v),
                    };
                    m.insert(k, val);
                }
                serde_json::to_writer(&mut *out, &Value::Object(m))?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
