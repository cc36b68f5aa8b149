//! Tabular and JSON serialization of command results.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "stokes-squeeze/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Missing,
}

impl Field {
    /// 17 significant digits, enough to round-trip any `f64`.
    fn csv(&self) -> String {
        match self {
            Field::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Field::Num(v) if v.is_nan() => "nan".into(),
            Field::Num(v) if *v > 0.0 => "inf".into(),
            Field::Num(_) => "-inf".into(),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(v) => json!(v),
            Field::Int(v) => json!(v),
            Field::Bool(v) => json!(v),
            Field::Text(s) => json!(s),
            Field::Missing => Value::Null,
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Missing, Field::Num)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<Option<bool>> for Field {
    fn from(v: Option<bool>) -> Self {
        v.map_or(Field::Missing, Field::Bool)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.into())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// `{"columns": [...], "rows": [[...], ...]}`; non-finite numbers become null.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Field::json).collect())).collect();
        json!({ "columns": self.columns, "rows": rows })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Field::csv))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Everything a command produces. `failure` is set when the command ran but
/// a check did not pass; the output is still written.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub table: Table,
    pub failure: Option<String>,
}

impl Report {
    pub fn envelope(&self) -> Value {
        json!({ "schema": SCHEMA_VERSION, "command": self.command, "result": self.result })
    }

    pub fn render<W: Write>(&self, format: Format, mut w: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.table.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.envelope())?;
                writeln!(w)?;
                Ok(())
            }
        }
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::Output(p.display().to_string(), e))?;
                let mut w = io::BufWriter::new(f);
                self.render(format, &mut w)?;
                w.flush()?;
                Ok(())
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                self.render(format, &mut w)
            }
        }
    }
}
