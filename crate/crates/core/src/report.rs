//! Versioned run reports: one record per check, a suite verdict, and
//! renderers for a human table and machine JSON.
//!
//! The JSON layout is the public contract for downstream tooling, so it
//! carries an explicit schema number.  Timing is optional per record and
//! omitted from JSON when absent, which keeps reports for identical
//! configurations byte-identical.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// One verified statement: what was asked, what was expected, what was
/// observed, and whether they agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: String,
    pub expected: String,
    pub observed: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckRecord {
    /// A record that passes exactly when expected and observed coincide.
    pub fn compare(
        name: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        observed: impl Into<String>,
    ) -> Self {
        let expected = expected.into();
        let observed = observed.into();
        let verdict = Verdict::from_bool(expected == observed);
        CheckRecord {
            name: name.into(),
            inputs: inputs.into(),
            expected,
            observed,
            verdict,
            millis: None,
        }
    }

    pub fn with_millis(mut self, millis: Option<u64>) -> Self {
        self.millis = millis;
        self
    }
}

/// A full run: command echo, seed, records sorted by name, suite verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let verdict = Verdict::from_bool(checks.iter().all(|c| c.verdict == Verdict::Pass));
        Report {
            schema: SCHEMA_VERSION,
            command: command.into(),
            seed,
            checks,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    /// Fixed-width table with one row per check and a suite summary line.
    pub fn render_table(&self) -> String {
        let header = ["check", "inputs", "expected", "observed", "verdict", "ms"];
        let rows: Vec<[String; 6]> = self
            .checks
            .iter()
            .map(|c| {
                [
                    c.name.clone(),
                    c.inputs.clone(),
                    c.expected.clone(),
                    c.observed.clone(),
                    c.verdict.as_str().to_string(),
                    c.millis.map_or_else(|| "-".to_string(), |m| m.to_string()),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row.iter()) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let render_row = |cells: &[String]| -> String {
            let mut line = String::new();
            for (i, cell) in cells.iter().enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                for _ in cell.chars().count()..widths[i] {
                    line.push(' ');
                }
            }
            line.trim_end().to_string()
        };
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("seed: {}\n", self.seed));
        let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
        out.push_str(&render_row(&header_cells));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in &rows {
            out.push_str(&render_row(row));
            out.push('\n');
        }
        out.push_str(&format!(
            "suite: {} ({} checks)\n",
            self.verdict.as_str(),
            self.checks.len()
        ));
        out
    }
}
