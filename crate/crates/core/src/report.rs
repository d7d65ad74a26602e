//! JSON-lines report records.

use serde::Serialize;
use serde_json::{Map, Value};

/// One check: `{"check": name, "n": dim, "seed": s, "max_residual": r, ...}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportLine {
    pub check: String,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl ReportLine {
    /// A residual check, passing iff `max_residual <= tolerance`.
    pub fn residual(
        check: impl Into<String>,
        n: usize,
        seed: u64,
        samples: usize,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        ReportLine {
            check: check.into(),
            n,
            seed,
            samples,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            extra: Map::new(),
        }
    }

    /// A yes/no check with no residual.
    pub fn flag(check: impl Into<String>, n: usize, seed: u64, pass: bool) -> Self {
        ReportLine {
            check: check.into(),
            n,
            seed,
            samples: 0,
            max_residual: 0.0,
            tolerance: 0.0,
            pass,
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(
            key.to_string(),
            serde_json::to_value(value).expect("report values serialize"),
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report line serializes")
    }
}

/// Trailing summary line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub summary: String,
    pub checks: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Summary {
    pub fn of(name: &str, lines: &[ReportLine]) -> Self {
        let failed = lines.iter().filter(|l| !l.pass).count();
        Summary {
            summary: name.to_string(),
            checks: lines.len(),
            failed,
            pass: failed == 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

/// Lines followed by the summary, newline-terminated.
pub fn render(name: &str, lines: &[ReportLine]) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(&l.to_json());
        out.push('\n');
    }
    out.push_str(&Summary::of(name, lines).to_json());
    out.push('\n');
    out
}
