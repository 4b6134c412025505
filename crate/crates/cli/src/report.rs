use std::time::Duration;

use serde_json::{json, Value};

use coinrt::acceptance::{Check, Checks};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Output of one command. Nothing is printed until the report is complete.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub subject: String,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
    pub data: Value,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: &'static str, subject: impl Into<String>) -> Self {
        Report {
            command,
            subject: subject.into(),
            lines: Vec::new(),
            checks: Vec::new(),
            data: Value::Null,
            elapsed: Duration::ZERO,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn add_checks(&mut self, c: Checks) {
        self.checks.extend(c.into_vec());
    }

    /// Every check passed. A report without checks passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    out.push_str(&format!("  {verdict} {}\n", c.name));
                } else {
                    out.push_str(&format!("  {verdict} {}: {}\n", c.name, c.detail));
                }
            }
            out.push_str(if self.passed() {
                "verdict: PASS\n"
            } else {
                "verdict: FAIL\n"
            });
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "command": self.command,
            "subject": self.subject,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "data": self.data,
            "elapsed_ms": self.elapsed.as_millis() as u64,
        })
    }
}
