//! Three-valued check results with term-level diagnostics.
//!
//! Because series are truncated, a membership or residue check can end in
//! three ways: the known coefficients certify the condition, a known
//! coefficient violates it, or the condition constrains coefficients that
//! lie beyond the truncation order.  The last case is reported as
//! [`Verdict::Indeterminate`], never as a silent pass or fail.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "HOLDS"),
            Verdict::Fails => write!(f, "FAILS"),
            Verdict::Indeterminate => write!(f, "INDETERMINATE"),
        }
    }
}

/// One offending (or unverifiable) term: which basis coefficient, at which
/// exponent, and what was required of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub label: String,
    pub exponent: i64,
    pub reason: String,
}

impl Finding {
    pub fn new(label: impl Into<String>, exponent: i64, reason: impl Into<String>) -> Self {
        Finding {
            label: label.into(),
            exponent,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at exponent {}: {}", self.label, self.exponent, self.reason)
    }
}

/// Outcome of a truncation-aware check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnosis {
    /// Known coefficients that violate the condition.
    pub violations: Vec<Finding>,
    /// Constraints that could not be checked because they reach past the
    /// truncation order.
    pub unverified: Vec<Finding>,
}

impl Diagnosis {
    pub fn verdict(&self) -> Verdict {
        if !self.violations.is_empty() {
            Verdict::Fails
        } else if !self.unverified.is_empty() {
            Verdict::Indeterminate
        } else {
            Verdict::Holds
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict() == Verdict::Holds
    }

    pub fn violation(&mut self, label: impl Into<String>, exponent: i64, reason: impl Into<String>) {
        self.violations.push(Finding::new(label, exponent, reason));
    }

    pub fn unverified(&mut self, label: impl Into<String>, exponent: i64, reason: impl Into<String>) {
        self.unverified.push(Finding::new(label, exponent, reason));
    }

    pub fn absorb(&mut self, other: Diagnosis) {
        self.violations.extend(other.violations);
        self.unverified.extend(other.unverified);
    }
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.violations {
            if !first {
                writeln!(f)?;
            }
            write!(f, "violation: {v}")?;
            first = false;
        }
        for u in &self.unverified {
            if !first {
                writeln!(f)?;
            }
            write!(f, "unverified: {u}")?;
            first = false;
        }
        if first {
            write!(f, "no findings")?;
        }
        Ok(())
    }
}
