use serde_json::{json, Map, Value};

use crate::numeric::{Interval, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// Plot-ready rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// A command result in all three renderings.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub json: Value,
    pub human: String,
    pub table: Option<Table>,
}

/// Run metadata attached to structured output.
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub seed: u64,
    pub precision: u32,
}

pub fn exact(r: &Rational) -> Value {
    json!({ "kind": "exact-rational", "value": r.to_string() })
}

pub fn log2(e: &Rational) -> Value {
    json!({ "kind": "exact-log2", "exponent": e.to_string() })
}

pub fn interval(iv: &Interval) -> Value {
    json!({ "kind": "interval", "lo": iv.lo, "hi": iv.hi })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn render(report: &Report, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Human => {
            let mut s = report.human.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert(
                "metadata".into(),
                json!({
                    "command": meta.command,
                    "seed": meta.seed,
                    "precision": meta.precision,
                    "version": env!("CARGO_PKG_VERSION"),
                }),
            );
            doc.insert("result".into(), report.json.clone());
            let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values always serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = format!(
                "# command={} seed={} precision={} version={}\n",
                meta.command,
                meta.seed,
                meta.precision,
                env!("CARGO_PKG_VERSION")
            );
            let table = report.table.clone().unwrap_or_else(|| {
                let mut pairs = Vec::new();
                flatten("", &report.json, &mut pairs);
                let mut t = Table::new(&["key", "value"]);
                for (k, v) in pairs {
                    t.push(vec![k, v]);
                }
                t
            });
            s.push_str(&table.headers.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(","));
            s.push('\n');
            for row in &table.rows {
                s.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
    }
}
