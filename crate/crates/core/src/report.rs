//! Pass/fail records shared by the verification suites.

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of instances evaluated.
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn single(name: &str, cases: u64, counterexample: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed: counterexample.is_none(),
            cases,
            counterexample,
        }
    }

    /// One case per entry; the first `Some` is the counterexample.
    pub fn from_results(name: &str, results: &[Option<String>]) -> Self {
        let ce = results.iter().flatten().next().cloned();
        Check::single(name, results.len() as u64, ce)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
