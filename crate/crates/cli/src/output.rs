use anyhow::{Context, Result};
use serde_json::{Map, Value};
use std::fmt::Write as _;
use std::path::Path;

/// A command result: named columns and rows of JSON values, plus optional
/// fixed-width text for the three-column layout.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub paper: Option<String>,
    pub extra: Option<Value>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            paper: None,
            extra: None,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    PaperTable,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(table: &Table, format: Format, metadata: &Map<String, Value>) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in metadata {
                writeln!(out, "# {k}: {}", cell(v))?;
            }
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                writeln!(out, "{}", row.iter().map(cell).collect::<Vec<_>>().join(","))?;
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Object(table.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            let mut doc = Map::new();
            doc.insert("metadata".into(), Value::Object(metadata.clone()));
            doc.insert("rows".into(), Value::Array(rows));
            if let Some(extra) = &table.extra {
                doc.insert("details".into(), extra.clone());
            }
            Ok(serde_json::to_string_pretty(&Value::Object(doc))? + "\n")
        }
        Format::PaperTable => table
            .paper
            .clone()
            .context("paper-table output is only available for spacing-table and moments"),
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
