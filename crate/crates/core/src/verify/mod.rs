//! Identity suite over all modules with a JSON-lines report.
//!
//! Each check measures one nonnegative error and compares it with its entry
//! in [`TOLERANCES`]. Failures, errors and panics inside a check become failed
//! entries; the suite itself never aborts.

mod checks;
mod tolerances;

use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::Serialize;
use serde_json::Value;

use crate::gap::GapConfig;
use crate::glmin::MinimizerConfig;
use crate::model::Potential;

pub use tolerances::{tolerance, Group, Tolerance, TOLERANCES};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub groups: Vec<Group>,
    pub potential: Potential,
    pub mu: f64,
    pub gap: GapConfig,
    pub minimizer: MinimizerConfig,
    /// Grid of the magnetic cell for the scaling and threshold checks.
    pub cell_n: usize,
    pub seed: u64,
    /// Multiplies `g1` inside the Matsubara check; `1` except in mutation tests.
    pub g1_scale: f64,
}

impl VerifyConfig {
    /// Gaussian `V = 2e^{−r²}` at `μ = 1` with every group enabled.
    pub fn reference() -> Self {
        Self {
            groups: Group::ALL.to_vec(),
            potential: Potential::gaussian(2.0, 1.0).expect("valid gaussian"),
            mu: 1.0,
            gap: GapConfig::default(),
            minimizer: MinimizerConfig::default(),
            cell_n: 64,
            seed: 7,
            g1_scale: 1.0,
        }
    }

    pub fn with_groups(mut self, groups: Vec<Group>) -> Self {
        self.groups = groups;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: &'static str,
    pub group: Group,
    pub anchor: &'static str,
    pub parameters: Value,
    /// `null` in JSON when the check could not produce a number.
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest `error / tolerance` over entries with a positive tolerance.
    pub max_error_ratio: f64,
    pub worst: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl VerificationReport {
    fn new(entries: Vec<Entry>) -> Self {
        let passed = entries.iter().filter(|e| e.passed).count();
        let mut max_error_ratio = 0.0;
        let mut worst = None;
        for e in &entries {
            if e.tolerance > 0.0 && e.error.is_finite() {
                let r = e.error / e.tolerance;
                if r > max_error_ratio {
                    max_error_ratio = r;
                    worst = Some(e.name);
                }
            }
        }
        let summary = Summary {
            total: entries.len(),
            passed,
            failed: entries.len() - passed,
            max_error_ratio,
            worst,
        };
        Self { entries, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// One JSON object per entry, then `{"summary": …}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entry serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "summary": self.summary }).to_string());
        out.push('\n');
        out
    }
}

/// Outcome of one check before it is matched against its tolerance.
pub(crate) struct Measured {
    pub error: f64,
    pub parameters: Value,
}

pub(crate) type CheckFn = fn(&mut checks::Context) -> crate::error::Result<Measured>;

fn run_one(name: &'static str, ctx: &mut checks::Context, f: CheckFn) -> Entry {
    let tol = tolerance(name);
    let outcome = catch_unwind(AssertUnwindSafe(|| f(ctx)));
    let (error, parameters, note) = match outcome {
        Ok(Ok(m)) => (m.error, m.parameters, None),
        Ok(Err(e)) => (f64::NAN, Value::Null, Some(e.to_string())),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (f64::NAN, Value::Null, Some(format!("panicked: {msg}")))
        }
    };
    Entry {
        name,
        group: tol.group,
        anchor: tol.anchor,
        parameters,
        error,
        tolerance: tol.tol,
        passed: error <= tol.tol,
        note,
    }
}

/// Runs every check of the enabled groups in declaration order.
pub fn run_identity_suite(config: &VerifyConfig) -> VerificationReport {
    let mut ctx = checks::Context::new(config.clone());
    let entries = checks::CHECKS
        .iter()
        .filter(|(name, _)| config.groups.contains(&tolerance(name).group))
        .map(|&(name, f)| run_one(name, &mut ctx, f))
        .collect();
    VerificationReport::new(entries)
}

#[cfg(test)]
mod tests;
