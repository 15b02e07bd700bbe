//! The run report every subcommand emits: one JSON object (or an indented
//! text rendering) with stable field names. Timing fields are the only part
//! excluded from determinism guarantees.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

/// Output rendering for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// What a single CLI invocation did. Serializes to a single JSON object;
/// identical command and seed give byte-identical output except for
/// `timings_ms`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    /// Subcommand name.
    pub command: String,
    /// Input paths and parameters, sorted by key.
    pub inputs: BTreeMap<String, Value>,
    /// Command-specific result object; always carries a `verdict` field.
    pub outcome: Value,
    /// Wall-clock per phase, milliseconds. Excluded from determinism.
    pub timings_ms: BTreeMap<String, u64>,
    /// Master seed, recorded whenever randomness was used.
    pub seed: Option<u64>,
    /// Paths of artifacts written by this run.
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            outcome: Value::Null,
            timings_ms: BTreeMap::new(),
            seed: None,
            artifacts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report inputs must serialize");
        self.inputs.insert(key.to_string(), v);
    }

    pub fn timing(&mut self, phase: &str, elapsed: Duration) {
        self.timings_ms.insert(phase.to_string(), elapsed.as_millis() as u64);
    }

    pub fn artifact(&mut self, path: impl Into<String>) {
        self.artifacts.push(path.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(self).expect("report must serialize")
            }
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "command: {}", self.command);
                if let Some(seed) = self.seed {
                    let _ = writeln!(out, "seed: {seed}");
                }
                if !self.inputs.is_empty() {
                    let _ = writeln!(out, "inputs:");
                    for (k, v) in &self.inputs {
                        let _ = writeln!(out, "  {k}: {}", compact(v));
                    }
                }
                let _ = writeln!(out, "outcome:");
                render_value(&mut out, &self.outcome, 1);
                if !self.timings_ms.is_empty() {
                    let _ = writeln!(out, "timings_ms:");
                    for (k, v) in &self.timings_ms {
                        let _ = writeln!(out, "  {k}: {v}");
                    }
                }
                for path in &self.artifacts {
                    let _ = writeln!(out, "artifact: {path}");
                }
                out
            }
        }
    }
}

/// Single-line rendering for scalar-ish values.
fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                match inner {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, inner, depth + 1);
                    }
                    Value::Array(items) if items.len() > 16 => {
                        let _ = writeln!(out, "{pad}{k}: [{} items]", items.len());
                    }
                    other => {
                        let _ = writeln!(out, "{pad}{k}: {}", compact(other));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", compact(other));
        }
    }
}
