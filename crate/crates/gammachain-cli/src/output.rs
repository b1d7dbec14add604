//! Self-describing tabular output: CSV with a `# key=value` comment header
//! or an equivalent JSON document.  Floats are printed with 17 significant
//! digits so identical runs produce bit-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};

use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, fixed scientific notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta.push((key.to_string(), fmt_float(value)));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Float(v) => fmt_float(*v),
                    Cell::Int(v) => v.to_string(),
                    Cell::Text(v) => v.clone(),
                })
                .collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    fn to_json(&self) -> String {
        let mut params = Map::new();
        for (k, v) in &self.meta {
            params.insert(k.clone(), Json::String(v.clone()));
        }
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                Json::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Float(v) => json!(v),
                            Cell::Int(v) => json!(v),
                            Cell::Text(v) => json!(v),
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "params": Json::Object(params),
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json serialization");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Write to a file, or stdout when `path` is `-`.
    pub fn write(&self, format: Format, path: &str) -> io::Result<()> {
        let body = self.render(format);
        if path == "-" {
            io::stdout().write_all(body.as_bytes())
        } else {
            fs::write(path, body)
        }
    }
}
