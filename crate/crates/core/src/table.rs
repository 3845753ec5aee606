//! Tabular output shared by every subcommand, written as CSV (with a schema
//! comment line) or as a JSON mirror of the same table.

use std::io::Write;

use serde_json::{json, Value};

use crate::error::{QstError, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub fn schema_line() -> String {
    format!("# qst-disorder-lab schema v{SCHEMA_VERSION}")
}

/// Reals are written with 17 significant digits so every value round-trips.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn to_csv_field(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub mode: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(mode: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            mode: mode.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "{}", schema_line()).expect("writing to a Vec cannot fail");
        let mut w = csv::Writer::from_writer(buf);
        let csv_err = |e: csv::Error| QstError::Consistency(format!("csv encoding: {e}"));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field))
                .map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| QstError::Consistency(format!("csv flush: {e}")))
    }

    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({
            "schema": format!("qst-disorder-lab schema v{SCHEMA_VERSION}"),
            "mode": self.mode,
            "columns": self.columns,
            "rows": rows,
        });
        let mut out = serde_json::to_vec_pretty(&doc).expect("table serializes");
        out.push(b'\n');
        out
    }
}
