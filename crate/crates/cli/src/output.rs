//! Tables, records and the provenance sidecar.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Column-oriented result: CSV with a header row, or a JSON array of objects.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.header)?;
        for row in &self.rows {
            wr.write_record(row.iter().map(cell))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.header.iter().cloned().zip(row.iter().cloned()).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        self.write_csv(io::BufWriter::new(file))
    }
}

/// What a command produced.
#[derive(Debug, Clone)]
pub enum Payload {
    Table(Table),
    Record(Value),
}

impl Payload {
    fn render(&self, format: Format) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        match (self, format) {
            (Payload::Table(t), Format::Csv) => t.write_csv(&mut buf)?,
            (Payload::Table(t), Format::Json) => {
                serde_json::to_writer_pretty(&mut buf, &t.to_json())?;
                buf.push(b'\n');
            }
            (Payload::Record(v), _) => {
                serde_json::to_writer_pretty(&mut buf, v)?;
                buf.push(b'\n');
            }
        }
        Ok(buf)
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn version_string() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// Write `payload` to `out` (or stdout) and, for file output, the sidecar.
pub fn emit(payload: &Payload, format: Format, out: Option<&Path>, meta: &Value) -> Result<()> {
    let bytes = payload.render(format)?;
    match out {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
            write_json(&sidecar_path(path), meta)?;
        }
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn provenance(command: &str, params: Value, cfg: &duffing_core::OscillatorConfig) -> Value {
    json!({
        "version": version_string(),
        "command": command,
        "oscillator": cfg,
        "parameters": params,
    })
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn opt_bool(x: Option<bool>) -> Value {
    x.map_or(Value::Null, Value::Bool)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_blank_nulls() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![num(1.5), Value::Null]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1.5,\n");
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new(["x"]);
        t.push(vec![json!(true)]);
        assert_eq!(t.to_json(), json!([{ "x": true }]));
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(sidecar_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.meta.json"));
    }
}
