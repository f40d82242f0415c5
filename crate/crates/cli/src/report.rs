//! Machine-readable report document: JSON with a fixed field order, CSV
//! with one row per claim, and the human text rendering.
//!
//! Determinism contract: identical inputs produce byte-identical JSON.
//! Curves appear in input order, claims in the (claim_id, r) order fixed by
//! the verifier, and nothing time- or environment-dependent is recorded
//! beyond the tool version and the echoed command line.

use eiscong::verify::{ClaimStatus, VerificationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub command: String,
    pub curves: Vec<CurveReport>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub label: Option<String>,
    pub conductor: u64,
    pub torsion_order: u64,
    pub torsion_gcd_bound: u64,
    /// Precision used for the main congruence, when one ran.
    pub congruence_precision: Option<usize>,
    pub claims: Vec<ClaimRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRow {
    pub claim_id: String,
    pub r: Option<u64>,
    pub status: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

fn status_str(status: ClaimStatus) -> &'static str {
    match status {
        ClaimStatus::Pass => "pass",
        ClaimStatus::Fail => "fail",
        ClaimStatus::NotApplicable => "not_applicable",
    }
}

impl ReportDocument {
    /// Assemble from verifier output; the summary is tallied here so it can
    /// never disagree with the listed claims.
    pub fn new(command: String, reports: &[VerificationReport]) -> Self {
        let mut summary = Summary {
            pass: 0,
            fail: 0,
            not_applicable: 0,
        };
        let curves = reports
            .iter()
            .map(|report| {
                let claims = report
                    .claims
                    .iter()
                    .map(|claim| {
                        match claim.status {
                            ClaimStatus::Pass => summary.pass += 1,
                            ClaimStatus::Fail => summary.fail += 1,
                            ClaimStatus::NotApplicable => summary.not_applicable += 1,
                        }
                        ClaimRow {
                            claim_id: claim.claim_id.to_string(),
                            r: claim.r,
                            status: status_str(claim.status).to_string(),
                            detail: claim.detail.render(),
                        }
                    })
                    .collect();
                CurveReport {
                    label: report.curve_label.clone(),
                    conductor: report.conductor,
                    torsion_order: report.torsion.order,
                    torsion_gcd_bound: report.torsion.gcd_bound,
                    congruence_precision: report.congruence_precision,
                    claims,
                }
            })
            .collect();
        ReportDocument {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            curves,
            summary,
        }
    }

    pub fn any_fail(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// CSV with columns (label, claim_id, r, status, detail).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,claim_id,r,status,detail\n");
        for curve in &self.curves {
            let label = curve.label.as_deref().unwrap_or("");
            for claim in &curve.claims {
                let r = claim.r.map(|r| r.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_field(label),
                    csv_field(&claim.claim_id),
                    r,
                    claim.status,
                    csv_field(&claim.detail)
                ));
            }
        }
        out
    }

    /// One block per curve, one line per claim.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for curve in &self.curves {
            out.push_str(&format!(
                "{}  N={}  torsion={} (gcd bound {})",
                curve.label.as_deref().unwrap_or("<unlabeled>"),
                curve.conductor,
                curve.torsion_order,
                curve.torsion_gcd_bound,
            ));
            if let Some(p) = curve.congruence_precision {
                out.push_str(&format!("  congruence precision {}", p));
            }
            out.push('\n');
            for claim in &curve.claims {
                let r = claim.r.map(|r| format!(" r={}", r)).unwrap_or_default();
                out.push_str(&format!(
                    "  {:<14} {}{}  {}\n",
                    claim.status, claim.claim_id, r, claim.detail
                ));
            }
        }
        out.push_str(&format!(
            "summary: pass={} fail={} not_applicable={}\n",
            self.summary.pass, self.summary.fail, self.summary.not_applicable
        ));
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
