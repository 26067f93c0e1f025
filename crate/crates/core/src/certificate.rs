//! Itemized verification reports.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Unsupported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Unsupported => "UNSUPPORTED",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// A concrete witness on failure (matrix entry, index, counterexample), else a summary.
    pub detail: String,
    pub elapsed: Duration,
}

/// Ordered list of checks. Only names, statuses and details are meant to be compared across
/// runs; elapsed times are informational.
#[derive(Clone, Debug, Default)]
pub struct Certificate {
    pub title: String,
    pub checks: Vec<Check>,
}

/// Outcome of one check body: pass flag and detail text.
pub type Outcome = Result<(bool, String)>;

impl Certificate {
    pub fn new(title: impl Into<String>) -> Certificate {
        Certificate { title: title.into(), checks: Vec::new() }
    }

    /// Runs `body`, timing it. Budget and unsupported errors are recorded as UNSUPPORTED,
    /// other errors as FAIL. Returns whether the check passed.
    pub fn record(&mut self, name: impl Into<String>, body: impl FnOnce() -> Outcome) -> bool {
        let start = Instant::now();
        let (status, detail) = match body() {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e @ (Error::Budget(_) | Error::Unsupported(_))) => (Status::Unsupported, e.to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(Check { name: name.into(), status, detail, elapsed: start.elapsed() });
        status == Status::Pass
    }

    pub fn skip(&mut self, name: impl Into<String>, why: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status: Status::Skip, detail: why.into(), elapsed: Duration::ZERO });
    }

    pub fn extend(&mut self, other: Certificate) {
        self.checks.extend(other.checks);
    }

    /// True when no check failed (skips and passes only).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| matches!(c.status, Status::Pass | Status::Skip))
    }

    pub fn has_unsupported(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Unsupported)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.get(name).map(|c| c.status)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for c in &self.checks {
            write!(f, "{:<11} {}", c.status.to_string(), c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
