//! Acceptance checks for the `sumroots` library: seeded generators,
//! independent oracles and one runner per criterion.

pub mod criteria;
pub mod gen;
pub mod oracles;

use serde::Serialize;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: u64,
    pub notes: Vec<String>,
}

impl CriterionResult {
    /// `PASS`/`FAIL` line without timing.
    pub fn line(&self) -> String {
        format!(
            "{} C{:<2} {} ({} checks, {} failures)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.failures
        )
    }
}

/// Runs one criterion. Criterion 10 reruns 1 to 9 twice.
pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    if id == 10 {
        let first: Vec<CriterionResult> = (1..=9).map(|i| criteria::run(i, seed)).collect();
        criteria::determinism(seed, &first)
    } else {
        criteria::run(id, seed)
    }
}

/// All ten criteria; the determinism check reuses the first pass.
pub fn run_suite(seed: u64) -> Vec<CriterionResult> {
    let mut results: Vec<CriterionResult> = (1..=9).map(|i| criteria::run(i, seed)).collect();
    let det = criteria::determinism(seed, &results);
    results.push(det);
    results
}

/// Canonical JSON for a list of results.
pub fn render(results: &[CriterionResult]) -> String {
    serde_json::to_string_pretty(results).expect("plain data serializes")
}
