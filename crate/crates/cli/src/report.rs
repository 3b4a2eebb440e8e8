//! Per-task outcomes, their JSON form and a plain-text rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::format::{PolyRepr, SymbolRepr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Difference {
    Symbol(SymbolRepr),
    Poly(PolyRepr),
}

/// A failing tuple and the quantity that should have vanished there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRepr {
    pub tuple: Vec<String>,
    pub difference: Difference,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub target: String,
    pub outcome: Outcome,
    pub summary: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl TaskReport {
    pub fn new(task: &str, target: impl Into<String>, outcome: Outcome, summary: impl Into<String>) -> Self {
        Self {
            task: task.to_string(),
            target: target.into(),
            outcome,
            summary: summary.into(),
            witnesses: Vec::new(),
            details: None,
            elapsed_ms: None,
        }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<WitnessRepr>) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = Some(details);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub scenario: String,
    pub scenario_sha256: String,
    pub outcome: Outcome,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn new(scenario: &str, sha256: &str, tasks: Vec<TaskReport>) -> Self {
        let outcome = if tasks.iter().any(|t| t.outcome == Outcome::Error) {
            Outcome::Error
        } else if tasks.iter().any(|t| t.outcome == Outcome::Fail) {
            Outcome::Fail
        } else {
            Outcome::Pass
        };
        Self {
            format_version: crate::scenario::FORMAT_VERSION,
            tool: "gamp",
            tool_version: env!("CARGO_PKG_VERSION"),
            scenario: scenario.to_string(),
            scenario_sha256: sha256.to_string(),
            outcome,
            tasks,
        }
    }

    /// 0 when every task passes, 1 on a failed check, 2 on a task error.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} (sha256 {})", self.scenario, &self.scenario_sha256[..16]);
        for t in &self.tasks {
            let _ = write!(out, "[{}] {}", t.outcome.as_str(), t.task);
            if !t.target.is_empty() {
                let _ = write!(out, " {}", t.target);
            }
            let _ = writeln!(out, ": {}", t.summary);
            for w in &t.witnesses {
                let _ = writeln!(out, "    witness ({})", w.tuple.join(","));
            }
            if let Some(ms) = t.elapsed_ms {
                let _ = writeln!(out, "    {ms} ms");
            }
        }
        let _ = writeln!(out, "outcome: {}", self.outcome.as_str());
        out
    }
}
