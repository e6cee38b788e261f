//! Itemized validation reports.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply to this input (e.g. the Koszul proxy with nontrivial `h`).
    Unchecked,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unchecked => "unchecked",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One validated invariant: the worst residual found against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub status: Status,
    pub detail: Option<String>,
}

impl Check {
    /// A residual check that passes when `residual <= threshold`.
    pub fn residual(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        let status = if residual <= threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            residual,
            threshold,
            status,
            detail: None,
        }
    }

    /// A check that passes when `value >= threshold` (e.g. a spectral ratio).
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        let status = if value >= threshold { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            residual: value,
            threshold,
            status,
            detail: None,
        }
    }

    pub fn unchecked(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: 0.0,
            threshold: 0.0,
            status: Status::Unchecked,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// True when no check failed; unchecked items do not count as failures.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{:<36} {:<9} residual {:.3e} threshold {:.1e}",
                c.name, c.status, c.residual, c.threshold
            )?;
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
