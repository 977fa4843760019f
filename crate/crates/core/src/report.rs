//! Conformance reports: named numeric checks with their measured deviation.
//!
//! A check is either [`Severity::Hard`] (a mathematical fact that must hold)
//! or [`Severity::Warning`] (a printed formula that is known to disagree with
//! the quadrature oracle; it is surfaced, never enforced).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Hard,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub identity_name: String,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Hard check passing iff `deviation <= tolerance`.
    pub fn hard(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            identity_name: name.into(),
            max_abs_deviation: deviation,
            tolerance,
            pass: deviation <= tolerance,
            severity: Severity::Hard,
            note: None,
        }
    }

    /// Hard check with an externally decided outcome (orderings, signs).
    pub fn hard_flag(name: impl Into<String>, margin: f64, pass: bool) -> Self {
        Self {
            identity_name: name.into(),
            max_abs_deviation: margin,
            tolerance: 0.0,
            pass,
            severity: Severity::Hard,
            note: None,
        }
    }

    /// Printed-formula comparison; `pass` records whether it agreed.
    pub fn warning(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            identity_name: name.into(),
            max_abs_deviation: deviation,
            tolerance,
            pass: deviation <= tolerance,
            severity: Severity::Warning,
            note: None,
        }
    }

    /// Overrides the outcome (for checks decided by an ordering, not a tolerance).
    pub fn pass_if(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_hard_failure(&self) -> bool {
        self.severity == Severity::Hard && !self.pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConformanceReport {
    pub checks: Vec<Check>,
}

impl ConformanceReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ConformanceReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.identity_name == name)
    }

    /// All checks whose name starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks
            .iter()
            .filter(move |c| c.identity_name.starts_with(prefix))
    }

    pub fn hard_failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.is_hard_failure()).collect()
    }

    pub fn warnings(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.severity == Severity::Warning && !c.pass)
            .collect()
    }

    pub fn all_hard_pass(&self) -> bool {
        self.checks.iter().all(|c| !c.is_hard_failure())
    }
}

/// `|a - b| / max(|b|, floor)`.
pub(crate) fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
