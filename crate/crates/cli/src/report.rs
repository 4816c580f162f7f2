use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), verdict: Verdict::Pass, cases: 0, failures: 0, counterexample: None }
    }

    pub fn skipped(name: impl Into<String>) -> Self {
        Check { verdict: Verdict::Skipped, ..Check::new(name) }
    }

    /// Records one case; keeps the first counterexample.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.verdict = Verdict::Fail;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    pub fn merge(&mut self, other: Check) {
        self.cases += other.cases;
        self.failures += other.failures;
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        }
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Config,
    pub checks: Vec<Check>,
    /// Command-specific output.
    pub data: Value,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &Config) -> Self {
        Report { command: command.into(), config: config.clone(), checks: Vec::new(), data: Value::Null, timing_ms: 0 }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    /// 0 all pass, 1 any failure, 3 nothing ran because of a guard.
    pub fn exit_code(&self) -> i32 {
        if !self.all_passed() {
            1
        } else if !self.checks.is_empty() && self.checks.iter().all(|c| c.verdict == Verdict::Skipped) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {} (seed {})", self.command, self.config.seed);
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "SKIP",
            };
            let _ = writeln!(s, "{v} {} ({} cases, {} failures)", c.name, c.cases, c.failures);
            if let Some(w) = &c.counterexample {
                let _ = writeln!(s, "  counterexample: {w}");
            }
        }
        if !self.data.is_null() {
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(&self.data).expect("data serializes"));
        }
        let _ = writeln!(s, "time: {} ms", self.timing_ms);
        s
    }
}
