//! Structured reports: JSON with a fixed key order, a conventions block
//! naming every normalization the numbers depend on, and a SHA-256 checksum
//! over the body so tampering is detectable. Parse-then-serialize is
//! byte-identical.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Conventions {
    pub measure: String,
    pub lattice_measures: String,
    pub metric: String,
    pub s_placement: String,
    pub residual_norm: String,
    pub shift_convention: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            measure: "counting on G, 1/|G| on the dual; Plancherel exact".into(),
            lattice_measures: "counting on Λ; s(Λ)^-1 · counting on Λ°".into(),
            metric: "per-coordinate wrap distances combined in Euclidean norm".into(),
            s_placement: "right action and all Λ° sums carry s(Λ)^-1".into(),
            residual_norm: "matrix residuals are max absolute entries".into(),
            shift_convention: "π(x,ω) = M_ω T_x; c(ξ1,ξ2) = conj(ω2(x1))".into(),
        }
    }
}

/// Body fields covered by the checksum, in serialization order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub conventions: Conventions,
    pub results: serde_json::Value,
    pub verdict: String,
    pub sha256: String,
}

fn body_digest(report: &Report) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        command: &'a str,
        tool_version: &'a str,
        seed: u64,
        config: &'a serde_json::Value,
        conventions: &'a Conventions,
        results: &'a serde_json::Value,
        verdict: &'a str,
    }
    let body = Body {
        command: &report.command,
        tool_version: &report.tool_version,
        seed: report.seed,
        config: &report.config,
        conventions: &report.conventions,
        results: &report.results,
        verdict: &report.verdict,
    };
    let bytes = serde_json::to_vec(&body).expect("report body serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(
        command: &str,
        seed: u64,
        config: serde_json::Value,
        results: serde_json::Value,
        verdict: &str,
    ) -> Self {
        let mut report = Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            conventions: Conventions::default(),
            results,
            verdict: verdict.to_string(),
            sha256: String::new(),
        };
        report.sha256 = body_digest(&report);
        report
    }

    /// Canonical file rendering: pretty JSON plus a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn checksum_ok(&self) -> bool {
        self.sha256 == body_digest(self)
    }
}

/// Outcome of re-reading a report file.
#[derive(Debug, Clone, Serialize)]
pub struct ReportCheck {
    pub parse_ok: bool,
    pub checksum_ok: bool,
    pub roundtrip_ok: bool,
}

/// Parses a rendered report and verifies both the checksum and that
/// parse-then-serialize reproduces the input bytes.
pub fn check_report_text(content: &str) -> Result<ReportCheck, serde_json::Error> {
    let report: Report = serde_json::from_str(content)?;
    Ok(ReportCheck {
        parse_ok: true,
        checksum_ok: report.checksum_ok(),
        roundtrip_ok: report.render() == content,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_report_checks_out() {
        let report = Report::new(
            "demo",
            7,
            serde_json::json!({"group": "Z8"}),
            serde_json::json!({"value": 2.891232114964899, "flag": true}),
            "pass",
        );
        assert!(report.checksum_ok());
        let rendered = report.render();
        let check = check_report_text(&rendered).unwrap();
        assert!(check.parse_ok);
        assert!(check.checksum_ok, "checksum should survive the roundtrip");
        assert!(check.roundtrip_ok, "bytes should survive the roundtrip");
    }

    #[test]
    fn tampering_is_detected() {
        let report = Report::new(
            "demo",
            7,
            serde_json::json!({}),
            serde_json::json!({"residual": 1e-12}),
            "pass",
        );
        let tampered = report.render().replace("\"pass\"", "\"fail\"");
        let check = check_report_text(&tampered).unwrap();
        assert!(!check.checksum_ok);
    }
}
