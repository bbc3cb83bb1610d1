use std::fmt;

use serde::Serialize;

/// Outcome of one parameter instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub params: String,
    pub passed: bool,
}

/// Result of checking one identity over a parameter range. A failing
/// report always carries the first counterexample found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub range: String,
    pub passed: bool,
    pub instances: Vec<Instance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl IdentityReport {
    pub fn new(identity: impl Into<String>, range: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            range: range.into(),
            passed: true,
            instances: Vec::new(),
            counterexample: None,
        }
    }

    /// Records an instance; `detail` is only built for the first failure.
    pub fn record(
        &mut self,
        params: impl Into<String>,
        passed: bool,
        detail: impl FnOnce() -> String,
    ) {
        let params = params.into();
        if !passed {
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(format!("{params}: {}", detail()));
            }
        }
        self.instances.push(Instance { params, passed });
    }

    pub fn failures(&self) -> usize {
        self.instances.iter().filter(|i| !i.passed).count()
    }

    /// Appends the instances of `other`, keeping the first counterexample.
    pub fn absorb(&mut self, other: IdentityReport) {
        if !other.passed {
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = other.counterexample;
            }
        }
        self.instances.extend(other.instances);
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(
            f,
            "{status} {} [{}] {} instances, {} failed",
            self.identity,
            self.range,
            self.instances.len(),
            self.failures()
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "; counterexample {c}")?;
        }
        Ok(())
    }
}
