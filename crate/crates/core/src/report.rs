//! Verification reports: one record per law per instance, serializable to
//! JSON and replayable from the recorded parameters.

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::verdict::Verdict;

/// A named law with a one-line statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Law {
    pub id: &'static str,
    pub statement: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub law: &'static str,
    pub statement: &'static str,
    /// `θ` the check ran at, when it depends on one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Value>,
    /// Vertices (1-based) and other inputs needed to replay the check.
    pub params: Value,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub instance: Value,
    pub suite: String,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn new(instance: Value, suite: impl Into<String>) -> Self {
        Report { instance, suite: suite.into(), summary: Summary::default(), checks: Vec::new(), wall_time_ms: 0.0 }
    }

    pub fn push(&mut self, law: Law, theta: Option<Value>, params: Value, verdict: Verdict) {
        match &verdict {
            Verdict::Pass => self.summary.passed += 1,
            Verdict::Fail { .. } => self.summary.failed += 1,
            Verdict::NotApplicable { .. } => self.summary.not_applicable += 1,
        }
        self.checks.push(CheckRecord { law: law.id, statement: law.statement, theta, params, verdict });
    }

    /// Records the outcome of a check that may refuse to run. Refusals on
    /// preconditions, size guards or degenerate inputs are not applicable;
    /// any other error is a failure.
    pub fn push_result(&mut self, law: Law, theta: Option<Value>, params: Value, result: Result<Verdict, Error>) {
        let verdict = match result {
            Ok(v) => v,
            Err(e @ (Error::Precondition(_) | Error::Guard(_) | Error::Degenerate(_))) => {
                Verdict::not_applicable(e.to_string())
            }
            Err(e) => Verdict::fail(e.to_string()),
        };
        self.push(law, theta, params, verdict);
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.verdict.is_fail())
    }

    pub fn merge(&mut self, other: Report) {
        for c in other.checks {
            let law = Law { id: c.law, statement: c.statement };
            self.push(law, c.theta, c.params, c.verdict);
        }
        self.wall_time_ms += other.wall_time_ms;
    }

    /// Short human-readable summary with one line per failure.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "suite {}: {} passed, {} failed, {} not applicable ({:.1} ms)\n",
            self.suite, self.summary.passed, self.summary.failed, self.summary.not_applicable, self.wall_time_ms
        );
        for c in self.failures() {
            if let Verdict::Fail { detail } = &c.verdict {
                out.push_str(&format!("FAIL {} {}: {}\n", c.law, c.params, detail));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    const LAW: Law = Law { id: "demo", statement: "a law" };

    #[test]
    fn counts_and_errors() {
        let mut r = Report::new(json!({}), "x");
        r.push(LAW, None, json!({}), Verdict::Pass);
        r.push_result(LAW, None, json!({}), Err(Error::Precondition("no".into())));
        r.push_result(LAW, None, json!({}), Err(Error::Invariant("bad".into())));
        assert_eq!(r.summary, Summary { passed: 1, failed: 1, not_applicable: 1 });
        assert!(!r.passed());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["checks"][2]["verdict"]["status"], json!("fail"));
    }
}
