//! Per-equation verdicts and their aggregation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::group::{AmbientAutomorphism, GroupElement};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub equation: String,
    pub simplex: Vec<usize>,
    pub verdict: Verdict,
    /// `LHS·RHS⁻¹` (or the composite automorphism) when the check fails.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(suite: &str, equation: &str, simplex: &[usize], pass: bool) -> CheckRecord {
        CheckRecord {
            suite: suite.to_string(),
            equation: equation.to_string(),
            simplex: simplex.to_vec(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            residual: None,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckRecord {
        self.note = Some(note.into());
        self
    }

    pub fn failure(suite: &str, equation: &str, simplex: &[usize], note: impl Into<String>) -> CheckRecord {
        CheckRecord::new(suite, equation, simplex, false).with_note(note)
    }

    /// Exact comparison of two group elements.
    pub fn group(suite: &str, equation: &str, simplex: &[usize], lhs: &GroupElement, rhs: &GroupElement) -> CheckRecord {
        let pass = lhs == rhs;
        let mut r = CheckRecord::new(suite, equation, simplex, pass);
        if !pass {
            r.residual = Some(residual(lhs.matrix(), rhs.matrix()));
        }
        r
    }

    /// Comparison of automorphisms by their action.
    pub fn aut(
        suite: &str,
        equation: &str,
        simplex: &[usize],
        lhs: &AmbientAutomorphism,
        rhs: &AmbientAutomorphism,
    ) -> CheckRecord {
        let pass = lhs.same_action(rhs);
        let mut r = CheckRecord::new(suite, equation, simplex, pass);
        if !pass {
            r.residual = Some(residual(lhs.matrix(), rhs.matrix()));
        }
        r
    }

    pub fn from_result(
        suite: &str,
        equation: &str,
        simplex: &[usize],
        r: crate::Result<CheckRecord>,
    ) -> CheckRecord {
        r.unwrap_or_else(|e| CheckRecord::failure(suite, equation, simplex, e.to_string()))
    }
}

fn residual(lhs: &Matrix, rhs: &Matrix) -> Vec<Vec<String>> {
    match rhs.inverse() {
        Ok(inv) => (lhs * &inv).rows_text(),
        Err(_) => lhs.rows_text(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub fingerprint: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(records: Vec<CheckRecord>, fingerprint: String) -> Report {
        let passed = records.iter().filter(|r| r.passed()).count();
        let summary = Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            vacuous: records.is_empty(),
        };
        Report {
            records,
            summary,
            fingerprint,
            notes: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let simplex: Vec<String> = r.simplex.iter().map(|v| v.to_string()).collect();
            let _ = write!(
                s,
                "{} {:<12} {:<16} [{}]",
                if r.passed() { "PASS" } else { "FAIL" },
                r.suite,
                r.equation,
                simplex.join(",")
            );
            if let Some(n) = &r.note {
                let _ = write!(s, "  ({n})");
            }
            s.push('\n');
            if let Some(res) = &r.residual {
                let _ = writeln!(s, "     residual {res:?}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(
            s,
            "{} checks, {} passed, {} failed{}  fingerprint {}",
            self.summary.total,
            self.summary.passed,
            self.summary.failed,
            if self.summary.vacuous { " (vacuous)" } else { "" },
            self.fingerprint
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
