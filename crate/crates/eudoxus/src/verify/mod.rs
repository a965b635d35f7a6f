//! Verification harness: bound checks, axiom checks, and reporting.
//!
//! Every check is deterministic given its seed and is reported with the
//! claim text, parameters, and a witness, one JSON line per check.

pub mod axioms;
pub mod bounds;
pub mod report;

pub use report::{summarize, write_jsonl, CheckReport, Outcome};

use crate::Result;
use num_rational::BigRational;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Budgeted to finish in well under a minute.
    Small,
    /// Larger exhaustive ranges and tighter tolerances.
    Full,
}

impl Scale {
    /// Tolerance for equality-style axiom checks at this scale.
    pub fn default_eps(self) -> BigRational {
        let denom: u64 = match self {
            Scale::Small => 1_000_000,
            Scale::Full => 1_000_000_000,
        };
        BigRational::new(1.into(), denom.into())
    }
}

/// Runs both suites plus the coverage meta-check.
pub fn run_all(seed: u64, scale: Scale, eps: Option<BigRational>) -> Result<Vec<CheckReport>> {
    let eps = eps.unwrap_or_else(|| scale.default_eps());
    let mut out = bounds::run_bound_checks(seed, scale)?;
    out.extend(axioms::run_axiom_checks(&eps, seed, scale)?);
    out.push(coverage(&out));
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(out)
}

/// Meta-check: every required claim id was actually produced.
fn coverage(produced: &[CheckReport]) -> CheckReport {
    let ids: Vec<&str> = produced.iter().map(|r| r.check_id.as_str()).collect();
    let missing: Vec<&str> = bounds::REQUIRED
        .iter()
        .chain(axioms::REQUIRED.iter())
        .filter(|want| !ids.contains(*want))
        .copied()
        .collect();
    let failure = if missing.is_empty() {
        None
    } else {
        Some(json!({"missing": missing}))
    };
    report::report(
        "meta/coverage",
        "every required check id appears in the run",
        json!({"required": bounds::REQUIRED.len() + axioms::REQUIRED.len()}),
        failure,
        json!({"produced": ids.len()}),
    )
}
