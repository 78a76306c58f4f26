//! Tabular experiment output: versioned CSV (primary) and a JSON mirror.
//!
//! Every table carries its schema tag in the first column of every row,
//! so concatenated or archived files stay self-describing. Rendering is
//! deliberately byte-deterministic: fixed column order, fixed row order
//! (the runner sorts tasks), shortest-roundtrip float formatting.

use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
}

impl OutFormat {
    pub fn parse(text: &str) -> Result<OutFormat> {
        match text {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            other => Err(Error::Config(format!(
                "format must be csv or json, got {other:?}"
            ))),
        }
    }
}

/// Rows of rendered cells under a fixed header.
#[derive(Clone, Debug)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match header"
        );
        self.rows.push(row);
    }

    pub fn append_rows(&mut self, rows: Vec<Vec<String>>) {
        for row in rows {
            self.push(row);
        }
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self, format: OutFormat, summary: Option<&serde_json::Value>) -> String {
        match format {
            OutFormat::Csv => self.to_csv(),
            OutFormat::Json => self.to_json(summary),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                push_csv_field(&mut out, cell);
            }
            out.push('\n');
        }
        out
    }

    /// JSON mirror: an object with the rows as column→cell maps (all
    /// cells stay strings, exactly as the CSV would print them) plus the
    /// optional summary.
    fn to_json(&self, summary: Option<&serde_json::Value>) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        let doc = serde_json::json!({
            "rows": rows,
            "summary": summary.cloned().unwrap_or(serde_json::Value::Null),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("static structure");
        text.push('\n');
        text
    }
}

fn push_csv_field(out: &mut String, cell: &str) {
    if cell.contains([',', '"', '\n', '\r']) {
        out.push('"');
        for ch in cell.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
    } else {
        out.push_str(cell);
    }
}

/// Writes rendered output to the chosen sink.
pub fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
