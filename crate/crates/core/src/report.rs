//! Machine-readable run summaries and the file formats used by `qh`.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Info,
}

/// One named check inside a run. Failed checks carry a witness.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

/// Summary of one command invocation. Timing is kept out of it so that
/// reports are byte-identical across runs and thread counts.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl RunReport {
    /// A report with no checks yet; its outcome is `info` until one is recorded.
    pub fn new(command: impl Into<String>, parameters: Value) -> Self {
        RunReport {
            command: command.into(),
            parameters,
            outcome: Outcome::Info,
            checks: Vec::new(),
            witnesses: Vec::new(),
            data: Value::Null,
        }
    }

    /// Records a check. A failing check with a null witness gets its name as witness,
    /// so a failed report never has an empty witness list.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Value) -> &mut Self {
        let name = name.into();
        if passed {
            if self.outcome == Outcome::Info {
                self.outcome = Outcome::Pass;
            }
        } else {
            self.outcome = Outcome::Fail;
            let w = if witness.is_null() { Value::String(name.clone()) } else { witness.clone() };
            self.witnesses.push(serde_json::json!({ "check": name, "witness": w }));
        }
        self.checks.push(Check { name, passed, witness });
        self
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub command: String,
    pub parameters: Value,
    pub version: String,
}

/// `{"meta": {...}, "data": ...}` wrapper for exported JSON files.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    pub meta: Meta,
    pub data: Value,
}

impl Envelope {
    pub fn new(command: impl Into<String>, parameters: Value, data: Value) -> Self {
        Envelope { meta: Meta { command: command.into(), parameters, version: VERSION.to_string() }, data }
    }

    pub fn write(&self, sink: &mut dyn Write) -> Result<()> {
        serde_json::to_writer(&mut *sink, self)?;
        sink.write_all(b"\n")?;
        Ok(())
    }
}

/// Comma-separated rows with a header line; LF line endings, no quoting
/// (fields are numbers).
pub fn write_csv(sink: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn outcome_transitions() {
        let mut r = RunReport::new("x", json!({}));
        assert_eq!(r.outcome, Outcome::Info);
        r.check("a", true, Value::Null);
        assert_eq!(r.outcome, Outcome::Pass);
        r.check("b", false, Value::Null);
        assert_eq!(r.outcome, Outcome::Fail);
        assert_eq!(r.witnesses.len(), 1);
        r.check("c", true, Value::Null);
        assert_eq!(r.outcome, Outcome::Fail);
        assert!(!r.passed());
    }

    #[test]
    fn json_shapes() {
        let mut r = RunReport::new("selfcheck", json!({"len": 4}));
        r.check("agree", false, json!({"index": 3}));
        let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["outcome"], "fail");
        assert_eq!(v["witnesses"][0]["witness"]["index"], 3);

        let mut buf = Vec::new();
        Envelope::new("export curve", json!({}), json!([1])).write(&mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["version"], VERSION);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["a", "b"], &[vec!["1".into(), "0.5".into()]]).unwrap();
        assert_eq!(buf, b"a,b\n1,0.5\n");
    }
}
