//! Tabular emission in CSV or JSON with one fixed float format.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A single field. Counts stay decimal strings in both formats.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(u64),
    Count(String),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Count(s) | Cell::Text(s) => Value::from(s.as_str()),
            // Non-finite floats become null.
            Cell::Float(x) => Value::from(*x),
            Cell::Bool(b) => Value::from(*b),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Count(s) | Cell::Text(s) => s.clone(),
            // Same shortest round-trip digits as the JSON number.
            other => other.to_json().to_string(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<polybern::Count> for Cell {
    fn from(c: polybern::Count) -> Self {
        Cell::Count(c.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    fn write_csv(&self, out: &mut String) {
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
}

/// Renders one or more tables. A single table is a JSON array of records;
/// several become an object keyed by table name, and CSV sections are
/// separated by a blank line.
pub fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                t.write_csv(&mut out);
            }
            out
        }
        Format::Json => {
            let value = match tables {
                [single] => single.to_json(),
                many => Value::Object(
                    many.iter()
                        .map(|t| (t.name.to_string(), t.to_json()))
                        .collect(),
                ),
            };
            let mut s = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
            s.push('\n');
            s
        }
    }
}
