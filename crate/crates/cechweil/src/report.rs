use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Outcome of a structural check. Violations are collected in order of
/// discovery; `first_violation` is what commands print on failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<String>,
    /// Observations that do not fail the check but are worth surfacing.
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&mut self, msg: String) {
        self.violations.push(msg);
    }

    pub fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }

    pub fn first_violation(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            write!(f, "pass")?;
        } else {
            write!(f, "FAIL ({} violation(s))", self.violations.len())?;
            for v in &self.violations {
                write!(f, "\n  {v}")?;
            }
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}
