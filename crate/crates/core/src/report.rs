//! Pass/fail records shared by the checkers and suites.

use std::fmt;

use serde::Serialize;

/// Whether a failing check means a bug or a reported observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    /// A proved statement; failure is an error.
    Asserted,
    /// An open question or a statement known to need correction; failure is reported only.
    Reported,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub severity: Severity,
    /// Counterexample or summary, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn asserted(name: impl Into<String>, passed: bool, detail: Option<String>) -> Self {
        Self { name: name.into(), passed, severity: Severity::Asserted, detail }
    }

    pub fn reported(name: impl Into<String>, passed: bool, detail: Option<String>) -> Self {
        Self { name: name.into(), passed, severity: Severity::Reported, detail }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub version: u32,
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self { version: 1, title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// No asserted check failed.
    pub fn ok(&self) -> bool {
        self.asserted_failures().next().is_none()
    }

    pub fn asserted_failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.severity == Severity::Asserted && !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for c in &self.checks {
            let status = match (c.passed, c.severity) {
                (true, _) => "PASS",
                (false, Severity::Asserted) => "FAIL",
                (false, Severity::Reported) => "NOTE",
            };
            write!(f, "{status} {}", c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
