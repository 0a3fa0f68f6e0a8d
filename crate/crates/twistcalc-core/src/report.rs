//! Structured verification reports.
//!
//! Every table row, sweep, identity and axiom check run by the verification
//! pipeline lands in a [`Report`] as a [`Check`] with a stable id.  Checks
//! carry one of four statuses:
//!
//! * `Pass` / `Fail` — the computed value matched (or failed to match) its
//!   reference value.
//! * `Discrepancy` — the engine result is recorded as deliberately diverging
//!   from a tabulated reference row; the divergence itself is expected and
//!   the check fails the run only when it *disappears*.
//! * `Info` — informational record (exploratory rows, candidate values that
//!   are expected not to hold); never affects the pass/fail verdict.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Discrepancy,
    Info,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Discrepancy => "DISCREPANCY",
            CheckStatus::Info => "INFO",
        };
        f.write_str(s)
    }
}

/// A single verification outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// Stable identifier, `family:twist:kind/key`.
    pub id: String,
    /// Human-readable description of what was checked.
    pub detail: String,
    /// Rendered reference value, when there is a meaningful one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    /// Rendered engine value, when it differs from the reference or the check
    /// records a computed table entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    pub status: CheckStatus,
}

/// An ordered collection of checks; order is insertion order, which the
/// verification pipeline keeps deterministic.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            id: id.into(),
            detail: detail.into(),
            expected: None,
            computed: None,
            status: CheckStatus::Pass,
        });
    }

    pub fn fail(
        &mut self,
        id: impl Into<String>,
        detail: impl Into<String>,
        expected: Option<String>,
        computed: Option<String>,
    ) {
        self.checks.push(Check {
            id: id.into(),
            detail: detail.into(),
            expected,
            computed,
            status: CheckStatus::Fail,
        });
    }

    pub fn discrepancy(
        &mut self,
        id: impl Into<String>,
        detail: impl Into<String>,
        expected: Option<String>,
        computed: Option<String>,
    ) {
        self.checks.push(Check {
            id: id.into(),
            detail: detail.into(),
            expected,
            computed,
            status: CheckStatus::Discrepancy,
        });
    }

    pub fn info(
        &mut self,
        id: impl Into<String>,
        detail: impl Into<String>,
        expected: Option<String>,
        computed: Option<String>,
    ) {
        self.checks.push(Check {
            id: id.into(),
            detail: detail.into(),
            expected,
            computed,
            status: CheckStatus::Info,
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn discrepancy_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Discrepancy)
            .map(|c| c.id.as_str())
            .collect()
    }

    /// The headline verdict: no failures, and the set of discrepancy ids is
    /// exactly the sanctioned set (unexpected discrepancies, or sanctioned
    /// ones that vanished, both count against the report).
    pub fn is_clean(&self, sanctioned_discrepancies: &[&str]) -> bool {
        if self.count(CheckStatus::Fail) != 0 {
            return false;
        }
        let mut got = self.discrepancy_ids();
        got.sort_unstable();
        got.dedup();
        let mut want: Vec<&str> = sanctioned_discrepancies.to_vec();
        want.sort_unstable();
        want.dedup();
        got == want
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} checks: {} pass, {} fail, {} discrepancy, {} info",
            self.checks.len(),
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Fail),
            self.count(CheckStatus::Discrepancy),
            self.count(CheckStatus::Info),
        )
    }

    pub fn render_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let interesting = c.status != CheckStatus::Pass;
            if !verbose && !interesting {
                continue;
            }
            out.push_str(&format!("[{}] {} — {}\n", c.status, c.id, c.detail));
            if let Some(e) = &c.expected {
                out.push_str(&format!("    reference: {}\n", e));
            }
            if let Some(g) = &c.computed {
                out.push_str(&format!("    computed:  {}\n", g));
            }
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "checks": self.checks,
            "summary": {
                "total": self.checks.len(),
                "pass": self.count(CheckStatus::Pass),
                "fail": self.count(CheckStatus::Fail),
                "discrepancy": self.count(CheckStatus::Discrepancy),
                "info": self.count(CheckStatus::Info),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_report_requires_exact_discrepancy_set() {
        let mut r = Report::new();
        r.pass("f:t:row/1", "ok");
        assert!(r.is_clean(&[]));
        r.discrepancy("f:t:drow/x", "recorded", None, None);
        assert!(!r.is_clean(&[]));
        assert!(r.is_clean(&["f:t:drow/x"]));
        assert!(!r.is_clean(&["f:t:drow/x", "f:t:drow/missing"]));
        r.fail("f:t:row/2", "bad", Some("1".into()), Some("2".into()));
        assert!(!r.is_clean(&["f:t:drow/x"]));
    }

    #[test]
    fn json_shape_has_summary_counts() {
        let mut r = Report::new();
        r.pass("a:b:c/d", "ok");
        r.info("a:b:c/e", "note", None, Some("v".into()));
        let j = r.to_json();
        assert_eq!(j["summary"]["total"], 2);
        assert_eq!(j["summary"]["pass"], 1);
        assert_eq!(j["summary"]["info"], 1);
        assert_eq!(j["checks"][0]["id"], "a:b:c/d");
    }
}
