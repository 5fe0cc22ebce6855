//! Experiment reports: JSON (schema `unital-forge/1`) and plain text.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "unital-forge/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inapplicable => "N/A ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

/// Everything that legitimately differs between otherwise identical runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub version: String,
    pub target: String,
    pub threads: usize,
    pub cache: bool,
}

impl Fingerprint {
    pub fn current(threads: usize, cache: bool) -> Fingerprint {
        Fingerprint {
            version: env!("CARGO_PKG_VERSION").to_string(),
            target: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
            threads,
            cache,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub experiment: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub fingerprint: Fingerprint,
}

impl Report {
    pub fn new(experiment: &str, params: Value, checks: Vec<Check>, fingerprint: Fingerprint) -> Report {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Inapplicable => summary.inapplicable += 1,
            }
        }
        Report { schema: SCHEMA.to_string(), experiment: experiment.to_string(), params, checks, summary, fingerprint }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment {} {}", self.experiment, self.params);
        for c in &self.checks {
            let _ = write!(s, "{} {}", c.status.label(), c.name);
            if let Some(w) = &c.witness {
                let _ = write!(s, "  {w}");
            }
            let _ = writeln!(s, "  ({} ms)", c.elapsed_ms);
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} inapplicable",
            self.summary.pass, self.summary.fail, self.summary.inapplicable
        );
        s
    }

    /// The JSON with timings and the fingerprint removed; runs that differ
    /// only in thread count or cache state agree on this string.
    pub fn canonical(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("fingerprint");
            if let Some(Value::Array(checks)) = map.get_mut("checks") {
                for c in checks {
                    if let Value::Object(c) = c {
                        c.remove("elapsed_ms");
                    }
                }
            }
        }
        v.to_string()
    }
}

/// Collects checks in order, timing each one.
#[derive(Default)]
pub struct Recorder {
    prefix: String,
    checks: Vec<Check>,
}

impl Recorder {
    pub fn new() -> Recorder {
        Recorder::default()
    }

    /// Names recorded after this call are prefixed with `scope/`.
    pub fn scope(&mut self, scope: &str) {
        self.prefix = if scope.is_empty() { String::new() } else { format!("{scope}/") };
    }

    pub fn run<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> (Status, Option<String>),
    {
        let start = Instant::now();
        let (status, witness) = f();
        self.push(name, status, witness, start.elapsed().as_millis() as u64);
    }

    pub fn push(&mut self, name: &str, status: Status, witness: Option<String>, elapsed_ms: u64) {
        self.checks.push(Check { name: format!("{}{name}", self.prefix), status, witness, elapsed_ms });
    }

    pub fn finish(self) -> Vec<Check> {
        self.checks
    }
}
