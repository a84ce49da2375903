//! Report documents and their JSON / CSV renderings.

use cuemom_core::mc::MomentEstimate;
use cuemom_core::ExactNumber;
use serde_json::{json, Map, Value};

use crate::args::Format;

/// One reported number (or row) with the formula that produced it.
#[derive(Clone, Debug, Default)]
pub struct Entry {
    fields: Map<String, Value>,
}

impl Entry {
    pub fn new(name: &str, value: Value, formula: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("name".into(), Value::from(name));
        fields.insert("value".into(), value);
        fields.insert("formula".into(), Value::from(formula));
        Entry { fields }
    }

    /// A row without a single headline value (tables, sweeps).
    pub fn row(name: &str, formula: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("name".into(), Value::from(name));
        fields.insert("formula".into(), Value::from(formula));
        Entry { fields }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.fields.insert(key.into(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }
}

/// `{"num": "...", "den": "..."}` for exact values, a JSON number otherwise.
pub fn number(x: &ExactNumber) -> Value {
    match x.num_den() {
        Some((num, den)) => json!({ "num": num, "den": den }),
        None => float(x.to_f64()),
    }
}

/// Non-finite floats become strings; JSON has no representation for them.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::from(format!("{x}"))
    }
}

/// Monte Carlo fields shared by every estimate.
pub fn estimate_fields(entry: Entry, e: &MomentEstimate) -> Entry {
    let entry = entry
        .with("std_error", float(e.std_error))
        .with("samples", json!(e.samples))
        .with("seed", json!(e.seed))
        .with("generator", json!(e.generator))
        .with("sampler", json!(e.sampler.name()))
        .with("resampled", json!(e.resampled));
    match e.top_share {
        Some(t) => entry.with("top_1pct_share", float(t)),
        None => entry,
    }
}

/// A finished command: its configuration, results and verdict.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub results: Vec<Entry>,
    /// Set by commands that check a criterion (`compare`).
    pub passed: Option<bool>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report { command: command.into(), config, results: Vec::new(), passed: None, warnings: Vec::new() }
    }

    pub fn push(&mut self, entry: Entry) {
        self.results.push(entry);
    }

    /// The canonical document. `timestamp` is the only field that varies
    /// between identical runs.
    pub fn to_json(&self, timestamp: Option<u64>) -> Value {
        let mut doc = Map::new();
        doc.insert("tool".into(), json!("cuemom"));
        doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        doc.insert("core_version".into(), json!(cuemom_core::VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("config".into(), self.config.clone());
        let results: Vec<Value> = self.results.iter().map(|e| Value::Object(e.fields.clone())).collect();
        doc.insert("results".into(), Value::Array(results));
        if let Some(p) = self.passed {
            doc.insert("passed".into(), json!(p));
        }
        doc.insert("warnings".into(), json!(self.warnings));
        if let Some(t) = timestamp {
            doc.insert("timestamp".into(), json!(t));
        }
        Value::Object(doc)
    }

    /// Flat table of the results: one column per field, in order of first
    /// appearance; exact rationals print as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<String> = Vec::new();
        for e in &self.results {
            for k in e.fields.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&columns).expect("in-memory write");
        for e in &self.results {
            let row: Vec<String> = columns.iter().map(|c| e.fields.get(c).map(cell).unwrap_or_default()).collect();
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn render(&self, format: Format, timestamp: Option<u64>) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(timestamp)).expect("serialisable");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Object(o) => match (o.get("num"), o.get("den")) {
            (Some(Value::String(n)), Some(Value::String(d))) if d == "1" => n.clone(),
            (Some(Value::String(n)), Some(Value::String(d))) => format!("{n}/{d}"),
            _ => v.to_string(),
        },
        other => other.to_string(),
    }
}
