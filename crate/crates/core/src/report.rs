//! Check results and their serialization.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckResult {
    /// Pass iff expected == actual. A failure without a witness falls back
    /// to the serialized actual value, so fail entries always carry one.
    pub fn compare(name: &str, expected: impl Serialize, actual: impl Serialize, witness: Option<String>) -> CheckResult {
        let expected = to_value(expected);
        let actual = to_value(actual);
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        CheckResult::with_status(name, status, expected, actual, witness)
    }

    /// Pass iff `ok`; `actual` describes what was observed.
    pub fn judge(name: &str, ok: bool, expected: impl Serialize, actual: impl Serialize, witness: Option<String>) -> CheckResult {
        let status = if ok { Status::Pass } else { Status::Fail };
        CheckResult::with_status(name, status, to_value(expected), to_value(actual), witness)
    }

    pub fn skipped(name: &str, reason: &str) -> CheckResult {
        CheckResult::with_status(name, Status::Skipped, Value::Null, Value::String(reason.into()), None)
    }

    fn with_status(name: &str, status: Status, expected: Value, actual: Value, witness: Option<String>) -> CheckResult {
        let witness = match status {
            Status::Pass | Status::Skipped => None,
            Status::Fail => Some(witness.unwrap_or_else(|| actual.to_string())),
        };
        CheckResult { name: name.into(), status, expected, actual, witness, elapsed_ms: 0 }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("unserializable: {e}")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub params: Value,
    pub checks: Vec<CheckResult>,
    pub totals: Totals,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub tables: Value,
}

impl Report {
    pub fn new(suite: &str, params: Value) -> Report {
        Report { suite: suite.into(), params, checks: Vec::new(), totals: Totals::default(), tables: Value::Null }
    }

    pub fn push(&mut self, c: CheckResult) {
        match c.status {
            Status::Pass => self.totals.pass += 1,
            Status::Fail => self.totals.fail += 1,
            Status::Skipped => self.totals.skipped += 1,
        }
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.totals.fail == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Deterministic serialization. JSON goes through serde_json's sorted map so
/// keys come out in canonical order.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let v = to_value(report);
            let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => text(report).into_bytes(),
    }
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite {}  params {}", r.suite, r.params);
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let _ = writeln!(s, "{tag:4} {}: {}", c.name, c.actual);
        if c.status == Status::Fail {
            let _ = writeln!(s, "     expected {}", c.expected);
        }
        if let Some(w) = &c.witness {
            let _ = writeln!(s, "     witness {w}");
        }
        if c.elapsed_ms > 0 {
            let _ = writeln!(s, "     {} ms", c.elapsed_ms);
        }
    }
    if let Value::Object(tables) = &r.tables {
        for (name, rows) in tables {
            let _ = writeln!(s, "table {name}");
            for row in rows.as_array().into_iter().flatten() {
                let _ = writeln!(s, "  {row}");
            }
        }
    }
    let t = r.totals;
    let _ = writeln!(s, "totals: {} pass, {} fail, {} skipped", t.pass, t.fail, t.skipped);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", json!({"p": 3, "d": 2}));
        r.push(CheckResult::compare("count", 40, 40, None));
        r.push(CheckResult::compare("other", 4, 5, Some("p^0 [1 0 0 0]".into())));
        r.push(CheckResult::skipped("big", "q too large"));
        r
    }

    #[test]
    fn serialization_is_deterministic() {
        let r = sample();
        assert_eq!(emit_report(&r, Format::Json), emit_report(&r.clone(), Format::Json));
        assert_eq!(emit_report(&r, Format::Text), emit_report(&r, Format::Text));
        let s = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
        // sorted keys within a check
        let a = s.find("\"actual\"").unwrap();
        assert!(a < s.find("\"elapsed_ms\"").unwrap() && a < s.find("\"name\"").unwrap());
    }

    #[test]
    fn empty_report_has_zero_totals() {
        let r = Report::new("empty", json!({}));
        let v: Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["totals"], json!({"pass": 0, "fail": 0, "skipped": 0}));
        assert_eq!(v["checks"], json!([]));
        assert!(r.passed());
    }

    #[test]
    fn failing_witness_round_trips() {
        let r = sample();
        let back: Report = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.checks[1].status, Status::Fail);
        assert_eq!(back.checks[1].witness.as_deref(), Some("p^0 [1 0 0 0]"));
        assert_eq!(back.totals, Totals { pass: 1, fail: 1, skipped: 1 });
    }

    #[test]
    fn failures_always_carry_a_witness() {
        let c = CheckResult::judge("x", false, "ok", json!({"n": 2}), None);
        assert_eq!(c.witness.as_deref(), Some("{\"n\":2}"));
        assert!(CheckResult::judge("y", true, 1, 1, Some("w".into())).witness.is_none());
    }
}
