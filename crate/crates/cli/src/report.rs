//! Check results and the machine-readable report.

use std::time::Instant;

use nctoric::{AlgebraError, Status};
use serde::Serialize;
use serde_json::Value;

pub const REPORT_VERSION: u32 = 1;

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// What a check body hands back on completion.
pub struct Verdict {
    pub status: Status,
    pub detail: String,
    pub value: Option<Value>,
}

impl Verdict {
    pub fn holds(ok: bool, detail: impl Into<String>) -> Self {
        Verdict { status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into(), value: None }
    }

    pub fn with_value(mut self, value: impl Serialize) -> Self {
        self.value = serde_json::to_value(value).ok();
        self
    }
}

/// Runs one check, mapping errors to FAIL or, for exhausted rewriting, to
/// INCONCLUSIVE.
pub fn run_check(name: &str, timings: bool, body: impl FnOnce() -> Result<Verdict, AlgebraError>) -> Check {
    let start = Instant::now();
    let (status, detail, value) = match body() {
        Ok(v) => (v.status, v.detail, v.value),
        Err(e) if e.is_inconclusive() => (Status::Inconclusive, e.to_string(), None),
        Err(e) => (Status::Fail, e.to_string(), None),
    };
    Check {
        name: name.to_string(),
        status,
        detail,
        value,
        elapsed_ms: timings.then(|| start.elapsed().as_millis() as u64),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecInfo {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub suite: String,
    pub spec: SpecInfo,
    pub seed: u64,
    pub theta: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, spec: SpecInfo, seed: u64, theta: String, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            report_version: REPORT_VERSION,
            tool: env!("CARGO_BIN_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            suite: suite.to_string(),
            spec,
            seed,
            theta,
            status: overall(&checks),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let time = c.elapsed_ms.map(|ms| format!(" [{ms} ms]")).unwrap_or_default();
            out.push_str(&format!("[{}] {}: {}{}\n", c.status, c.name, c.detail, time));
        }
        out.push_str(&format!(
            "{} on {}: {} ({} checks)\n",
            self.suite,
            self.spec.name,
            self.status,
            self.checks.len()
        ));
        out
    }
}

/// FAIL dominates INCONCLUSIVE, which dominates PASS.
pub fn overall(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}
