//! Machine-readable run reports. JSON is the canonical output; text mode
//! renders the same structure.

use serde::Serialize;

/// Envelope around every command's output. Two runs with the same config
/// produce byte-identical JSON except for `wall_time`.
#[derive(Serialize)]
pub struct RunReport<C: Serialize, R: Serialize> {
    pub command: &'static str,
    pub config: C,
    pub result: R,
    /// Seconds; the only nondeterministic field.
    pub wall_time: f64,
    pub samples_used: Option<u64>,
    pub warnings: Vec<String>,
}

impl<C: Serialize, R: Serialize> RunReport<C, R> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// One check of the validation suite.
#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub k: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct ValidationSummary {
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl ValidationSummary {
    pub fn new(checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        let failed = checks.len() - passed;
        ValidationSummary { checks, passed, failed }
    }
}
