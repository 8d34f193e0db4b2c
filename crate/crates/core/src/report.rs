//! Check records and the report emitted by the verification suites.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::coeffs::Bindings;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// Informational record; never affects the exit code.
    #[serde(rename = "n/a")]
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "n/a",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub paper_eq: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, paper_eq: impl Into<String>) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            paper_eq: paper_eq.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, paper_eq: impl Into<String>, witness: impl Into<String>) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            paper_eq: paper_eq.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn info(name: impl Into<String>, paper_eq: impl Into<String>, witness: impl Into<String>) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            paper_eq: paper_eq.into(),
            status: Status::Info,
            witness: Some(witness.into()),
        }
    }

    /// Pass when `counterexample` is `None`.
    pub fn from_outcome(
        name: impl Into<String>,
        paper_eq: impl Into<String>,
        counterexample: Option<String>,
    ) -> CheckRecord {
        match counterexample {
            None => CheckRecord::pass(name, paper_eq),
            Some(w) => CheckRecord::fail(name, paper_eq, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<4}  {}", self.status.to_string(), self.name)?;
        if !self.paper_eq.is_empty() {
            write!(f, " ({})", self.paper_eq)?;
        }
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub family: Option<String>,
    pub bindings: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: impl Into<String>, family: Option<String>, bindings: &Bindings, seed: Option<u64>) -> Report {
        Report {
            schema: 1,
            command: command.into(),
            family,
            bindings: bindings.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.command)?;
        if let Some(family) = &self.family {
            write!(f, "  family {family}")?;
        }
        for (k, v) in &self.bindings {
            write!(f, "  {k}={v}")?;
        }
        if let Some(seed) = self.seed {
            write!(f, "  seed {seed}")?;
        }
        writeln!(f)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
