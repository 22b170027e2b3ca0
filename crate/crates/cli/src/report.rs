use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    pub p: u32,
    pub n: u32,
    pub q: u32,
    pub w: u32,
    pub records: Vec<Value>,
    pub summary: Summary,
}

pub const STATUS_PASS: &str = "pass";
pub const STATUS_FAIL: &str = "fail";
pub const STATUS_SKIPPED: &str = "skipped";

impl ScanReport {
    pub fn summarize(&mut self) {
        let status = |s: &str| {
            self.records
                .iter()
                .filter(|r| r.get("status").and_then(Value::as_str) == Some(s))
                .count()
        };
        self.summary = Summary {
            records: self.records.len(),
            passed: status(STATUS_PASS),
            failed: status(STATUS_FAIL),
            skipped: status(STATUS_SKIPPED),
        };
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s =
            serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// One row per record; nested objects become dotted columns and arrays
    /// are kept as compact JSON.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut rows: Vec<Vec<(String, String)>> = Vec::new();
        for record in &self.records {
            let mut row = vec![
                ("command".to_string(), self.command.clone()),
                ("p".to_string(), self.p.to_string()),
                ("n".to_string(), self.n.to_string()),
                ("w".to_string(), self.w.to_string()),
            ];
            flatten("", record, &mut row);
            rows.push(row);
        }
        let mut columns: Vec<String> = Vec::new();
        for row in &rows {
            for (k, _) in row {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&columns).map_err(err)?;
        for row in &rows {
            let cells = columns.iter().map(|c| {
                row.iter()
                    .find(|(k, _)| k == c)
                    .map(|(_, v)| v.as_str())
                    .unwrap_or("")
            });
            w.write_record(cells).map_err(err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Array(_) => out.push((prefix.to_string(), value.to_string())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Merges `extra` into the object `base`.
pub fn merge(base: &mut Map<String, Value>, extra: Value) {
    if let Value::Object(m) = extra {
        base.extend(m);
    }
}
