//! Tabular result sinks: CSV with a fixed header, and JSON lines with fields in
//! header order. Big integers travel as decimal strings, rationals as `n/d`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::squarefull::LinnikRecord;

/// Rows of JSON scalars under a fixed header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| csv_field(&cell_text(v))).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json_lines(&self, w: &mut impl Write) -> std::io::Result<()> {
        for row in &self.rows {
            writeln!(w, "{}", self.row_json(row))?;
        }
        Ok(())
    }

    /// One JSON object, keys in header order.
    pub fn row_json(&self, row: &[Value]) -> String {
        let fields: Vec<String> = self
            .header
            .iter()
            .zip(row)
            .map(|(k, v)| format!("{}:{}", Value::String(k.clone()), v))
            .collect();
        format!("{{{}}}", fields.join(","))
    }

    pub fn write(&self, w: &mut impl Write, format: Format) -> std::io::Result<()> {
        match format {
            Format::Json => self.write_json_lines(w),
            Format::Csv => self.write_csv(w),
        }
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes `table` to `path`; an unwritable path is a resource error.
pub fn emit_report(table: &Table, path: &Path, format: Format) -> Result<()> {
    let io = |e: std::io::Error| Error::resource(format!("writing {}", path.display()), e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    table.write(&mut w, format).map_err(io)?;
    w.flush().map_err(io)
}

pub const LINNIK_HEADER: [&str; 5] = ["p", "a", "F", "is_qnr", "n_p"];

/// One row per residue class of each record.
pub fn linnik_table_rows(records: &[LinnikRecord]) -> Table {
    let mut t = Table::new(&LINNIK_HEADER);
    for rec in records {
        for (a, &f) in rec.f.iter().enumerate() {
            t.push(vec![
                Value::from(rec.p),
                Value::from(a as u64),
                Value::from(f),
                Value::from(rec.is_qnr(a as u64)),
                Value::from(rec.n_p),
            ]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_has_header() {
        let mut out = Vec::new();
        linnik_table_rows(&[]).write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "p,a,F,is_qnr,n_p\n");
    }

    #[test]
    fn quoting_and_order() {
        let mut t = Table::new(&["z", "a"]);
        t.push(vec![Value::from("1/2"), Value::from("x,y")]);
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "z,a\n1/2,\"x,y\"\n");
        assert_eq!(t.row_json(&t.rows[0]), r#"{"z":"1/2","a":"x,y"}"#);
    }
}
