use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use gradalib::Error;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Process outcome, mapped to exit codes 0 to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Success,
    Violation,
    ParseError,
    BudgetExhausted,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Violation => 1,
            Outcome::ParseError => 2,
            Outcome::BudgetExhausted => 3,
        }
    }

    pub fn of_error(e: &Error) -> Outcome {
        match e {
            Error::BoundExceeded(_) | Error::InsufficientMargin { .. } => Outcome::BudgetExhausted,
            Error::Parse(_)
            | Error::UnknownVertex(_)
            | Error::UnknownArrow(_)
            | Error::InhomogeneousRelation { .. }
            | Error::NonParallelRelation { .. }
            | Error::InfiniteDimensional(_)
            | Error::RelationViolated(_)
            | Error::ShapeMismatch(_)
            | Error::InhomogeneousBlock { .. }
            | Error::NotPrime(_)
            | Error::InvalidArgument(_) => Outcome::ParseError,
            _ => Outcome::Violation,
        }
    }
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        ExitCode::from(o.code())
    }
}

/// A command report: human-readable lines plus a JSON document whose
/// `deterministic` section depends only on inputs, flags and seed.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub budget: Value,
    pub result: Value,
    pub certificates: BTreeMap<String, String>,
    pub lines: Vec<String>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            seed,
            budget: Value::Null,
            result: json!({}),
            certificates: BTreeMap::new(),
            lines: Vec::new(),
            outcome: Outcome::Success,
        }
    }

    /// Records the SHA-256 of an input file.
    pub fn input(&mut self, path: &Path) {
        if let Ok(bytes) = std::fs::read(path) {
            self.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.result[key] = v;
    }

    pub fn escalate(&mut self, o: Outcome) {
        self.outcome = self.outcome.max(o);
    }

    pub fn deterministic(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "budget": self.budget,
            "verdicts": self.result,
            "certificates": self.certificates,
            "exit_code": self.outcome.code(),
        })
    }

    pub fn to_json(&self, elapsed: Duration) -> String {
        let doc = json!({
            "command": self.command,
            "deterministic": self.deterministic(),
            "timings": { "elapsed_ms": elapsed.as_secs_f64() * 1e3 },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// A report for a failed command.
pub fn error_report(command: &str, seed: u64, e: &Error) -> Report {
    let mut r = Report::new(command, seed);
    r.set("error", json!(e.to_string()));
    r.line(format!("error: {e}"));
    r.outcome = Outcome::of_error(e);
    r
}
