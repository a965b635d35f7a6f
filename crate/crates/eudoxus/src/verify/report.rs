//! Report records emitted by the verification harness.

use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped(String),
}

/// One verified claim: what was checked, with which parameters, and what
/// happened. Serialized as one JSON line per check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    /// Stable identifier, e.g. "bounds/opt-div-inequality".
    pub check_id: String,
    /// The inequality or law being verified, in plain text.
    pub claim: String,
    pub parameters: serde_json::Value,
    pub outcome: Outcome,
    /// Supporting data: counts on a pass, the offending instance on a
    /// failure.
    pub witness: serde_json::Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

/// Convenience constructor for the common pass/fail-with-witness shape.
pub fn report(
    check_id: &str,
    claim: &str,
    parameters: serde_json::Value,
    failure: Option<serde_json::Value>,
    pass_witness: serde_json::Value,
) -> CheckReport {
    match failure {
        Some(w) => CheckReport {
            check_id: check_id.into(),
            claim: claim.into(),
            parameters,
            outcome: Outcome::Fail,
            witness: w,
        },
        None => CheckReport {
            check_id: check_id.into(),
            claim: claim.into(),
            parameters,
            outcome: Outcome::Pass,
            witness: pass_witness,
        },
    }
}

pub fn skipped(
    check_id: &str,
    claim: &str,
    parameters: serde_json::Value,
    reason: &str,
) -> CheckReport {
    CheckReport {
        check_id: check_id.into(),
        claim: claim.into(),
        parameters,
        outcome: Outcome::Skipped(reason.into()),
        witness: serde_json::Value::Null,
    }
}

/// Writes one JSON object per line, sorted by check id.
pub fn write_jsonl(reports: &[CheckReport], out: &mut dyn Write) -> std::io::Result<()> {
    let mut sorted: Vec<&CheckReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    for r in sorted {
        let line = serde_json::to_string(r).expect("reports serialize");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Human-readable one-line-per-check summary plus totals.
pub fn summarize(reports: &[CheckReport]) -> String {
    let mut sorted: Vec<&CheckReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let mut out = String::new();
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for r in sorted {
        let tag = match &r.outcome {
            Outcome::Pass => {
                pass += 1;
                "PASS".to_string()
            }
            Outcome::Fail => {
                fail += 1;
                "FAIL".to_string()
            }
            Outcome::Skipped(reason) => {
                skip += 1;
                format!("SKIP ({reason})")
            }
        };
        out.push_str(&format!("{:<44} {}\n", r.check_id, tag));
    }
    out.push_str(&format!(
        "{} checks: {pass} passed, {fail} failed, {skip} skipped\n",
        reports.len()
    ));
    out
}
