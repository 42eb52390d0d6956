//! Check records and reports.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Confirmed,
    Consistent,
    Inconclusive,
    Violated,
    NotStrict,
    Indeterminate,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Violated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Confirmed => "Confirmed",
            Status::Consistent => "Consistent",
            Status::Inconclusive => "Inconclusive",
            Status::Violated => "Violated",
            Status::NotStrict => "NotStrict",
            Status::Indeterminate => "Indeterminate",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<f64>,
    pub tol: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, tol: f64) -> Self {
        Self { name: name.into(), status, lhs: None, rhs: None, tol, detail: String::new(), runtime_ms: None }
    }

    pub fn values(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// `Confirmed` if `ok`, else `Violated`.
    pub fn assert(name: impl Into<String>, ok: bool, tol: f64) -> Self {
        Self::new(name, if ok { Status::Confirmed } else { Status::Violated }, tol)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub units: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub confirmed: usize,
    pub consistent: usize,
    pub inconclusive: usize,
    pub violated: usize,
    pub other: usize,
}

impl Report {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Self {
        let mut summary = Summary { total: checks.len(), ..Summary::default() };
        for c in &checks {
            match c.status {
                Status::Confirmed => summary.confirmed += 1,
                Status::Consistent => summary.consistent += 1,
                Status::Inconclusive => summary.inconclusive += 1,
                Status::Violated => summary.violated += 1,
                _ => summary.other += 1,
            }
        }
        Self { suite: suite.into(), units: "nats", budget: None, checks, summary, data: None }
    }

    pub fn has_violation(&self) -> bool {
        self.summary.violated > 0
    }

    /// Plain-text table, one line per check.
    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!("suite {} (logarithms in nats)\n", self.suite);
        for c in &self.checks {
            let mut line = format!("{:<14} {:<width$}", c.status.as_str(), c.name);
            if let (Some(l), Some(r)) = (c.lhs, c.rhs) {
                line.push_str(&format!("  lhs={l:.12} rhs={r:.12}"));
            }
            if !c.detail.is_empty() {
                line.push_str(&format!("  {}", c.detail));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} confirmed, {} consistent, {} inconclusive, {} violated, {} other\n",
            s.total, s.confirmed, s.consistent, s.inconclusive, s.violated, s.other
        ));
        out
    }
}
