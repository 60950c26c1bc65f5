use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a mechanical verification, with a human-readable witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass() -> Self {
        Check { passed: true, witness: None }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Check { passed: false, witness: Some(witness.into()) }
    }

    pub fn and(self, other: Check) -> Check {
        if self.passed {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None if self.passed => write!(f, "pass"),
            None => write!(f, "fail"),
            Some(w) if self.passed => write!(f, "pass ({w})"),
            Some(w) => write!(f, "fail: {w}"),
        }
    }
}
