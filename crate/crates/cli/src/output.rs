use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::error::CliError;

/// Rows of plot data.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|x| x.to_string()).collect());
    }
}

/// What a command produced: the JSON report and, when it has one, a table.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(value: &impl Serialize) -> Self {
        Report { json: serde_json::to_value(value).expect("report serialization"), table: None }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

/// Top-level scalar fields as `field,value` rows.
fn scalar_table(v: &Value) -> Table {
    let mut t = Table::new(&["field", "value"]);
    if let Value::Object(map) = v {
        for (k, x) in map {
            let cell = match x {
                Value::String(s) => s.clone(),
                Value::Number(_) | Value::Bool(_) => x.to_string(),
                Value::Null => String::new(),
                _ => continue,
            };
            t.rows.push(vec![k.clone(), cell]);
        }
    }
    t
}

fn csv_bytes(table: &Table) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::io(e.to_string(), json!({}));
    w.write_record(&table.header).map_err(fail)?;
    for r in &table.rows {
        w.write_record(r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::io(e.to_string(), json!({})))
}

pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json rendering");
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => csv_bytes(report.table.as_ref().unwrap_or(&scalar_table(&report.json))),
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::io(e.to_string(), json!({ "path": path.display().to_string() }))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::io(e.to_string(), json!({})))
        }
    }
}
