//! The JSON report every subcommand prints, and its plain-text rendering.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct Provenance {
    /// Which output field the tag backs.
    pub field: String,
    pub source: String,
}

impl Provenance {
    pub fn new(field: impl Into<String>, source: impl Into<String>) -> Self {
        Provenance { field: field.into(), source: source.into() }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub provenance: Vec<Provenance>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Same content as [`Report::to_json`], laid out for reading.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        render(&value, 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(is_scalar) => {
            format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

/// Arrays whose items are all scalars or flat lists print inline.
fn is_inline(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| is_scalar(i) || is_inline(i)),
        other => is_scalar(other),
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (key, item) in map {
                if is_inline(item) {
                    out.push_str(&format!("{pad}{key}: {}\n", inline(item)));
                } else if let Some(rows) = table_rows(item) {
                    out.push_str(&format!("{pad}{key}:\n"));
                    table(&rows, depth + 1, out);
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render(item, depth + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_inline(item) {
                    out.push_str(&format!("{pad}- {}\n", inline(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(item, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

/// A non-empty array of objects whose values all print inline.
fn table_rows(v: &Value) -> Option<Vec<&Map<String, Value>>> {
    let items = v.as_array()?;
    if items.is_empty() {
        return None;
    }
    items
        .iter()
        .map(|i| i.as_object().filter(|m| m.values().all(is_inline)))
        .collect()
}

fn table(rows: &[&Map<String, Value>], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let mut columns: Vec<&String> = Vec::new();
    for row in rows {
        for key in row.keys() {
            if !columns.contains(&key) {
                columns.push(key);
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| columns.iter().map(|c| row.get(*c).map_or("-".into(), inline)).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<String>| {
        let joined: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("{pad}{}\n", joined.join("  ").trim_end())
    };
    out.push_str(&line(columns.iter().map(|c| c.to_string()).collect()));
    for row in cells {
        out.push_str(&line(row));
    }
}
