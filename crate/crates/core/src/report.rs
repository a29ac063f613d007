//! Verification reports with a stable JSON shape and an aligned text form.

use std::fmt::Write as _;

use serde_json::{Map, Value};

/// Outcome of one check: `{"check", "params", "pass", "witness"}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub check: String,
    pub params: Map<String, Value>,
    pub pass: bool,
    pub witness: Value,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            params: Map::new(),
            pass: true,
            witness: Value::Object(Map::new()),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Adds a witness entry; the witness is always a JSON object here.
    pub fn witness(&mut self, key: &str, value: impl Into<Value>) {
        if let Value::Object(map) = &mut self.witness {
            map.insert(key.to_string(), value.into());
        }
    }

    /// Records a named sub-check and folds it into `pass`.
    pub fn require(&mut self, key: &str, ok: bool) {
        self.witness(key, ok);
        self.pass &= ok;
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "check": self.check,
            "params": Value::Object(self.params.clone()),
            "pass": self.pass,
            "witness": self.witness,
        })
    }

    /// Aligned `key  value` lines; nested witness values are printed as
    /// compact JSON unless they are strings.
    pub fn to_text(&self, color: bool) -> String {
        let verdict = match (self.pass, color) {
            (true, true) => "\x1b[32mPASS\x1b[0m".to_string(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".to_string(),
            (true, false) => "PASS".to_string(),
            (false, false) => "FAIL".to_string(),
        };
        let mut rows: Vec<(String, String)> = vec![("check".into(), self.check.clone())];
        for (k, v) in &self.params {
            rows.push((format!("param.{k}"), render(v)));
        }
        if let Value::Object(map) = &self.witness {
            for (k, v) in map {
                rows.push((k.clone(), render(v)));
            }
        }
        rows.push(("result".into(), verdict));
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_stable() {
        let mut r = Report::new("demo").param("k", 1);
        r.require("bound", true);
        r.witness("element", "w");
        let v = r.to_json();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["check", "params", "pass", "witness"]);
        assert_eq!(v["pass"], true);
        r.require("other", false);
        assert!(!r.pass);
        assert!(r.to_text(false).contains("FAIL"));
    }
}
