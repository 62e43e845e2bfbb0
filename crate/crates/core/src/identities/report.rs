use std::fmt;

use serde::{Deserialize, Serialize};

/// One comparison point: named coordinates and both sides of the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub at: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
}

impl ReportPoint {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Outcome of one identity check. `pass` holds exactly when
/// `max_abs_discrepancy <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub points: Vec<ReportPoint>,
    pub max_abs_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), points: Vec::new(), max_abs_discrepancy: 0.0, tolerance, pass: true, note: None }
    }

    pub fn push(&mut self, at: &[(&str, f64)], lhs: f64, rhs: f64) {
        self.points.push(ReportPoint { at: at.iter().map(|(k, v)| (k.to_string(), *v)).collect(), lhs, rhs });
        self.refresh();
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.refresh();
        self
    }

    /// Append every point of `other` (used to build suites of one name).
    pub fn merge(&mut self, other: IdentityReport) {
        self.points.extend(other.points);
        if self.note.is_none() {
            self.note = other.note;
        }
        self.refresh();
    }

    fn refresh(&mut self) {
        self.max_abs_discrepancy = self.points.iter().map(ReportPoint::discrepancy).fold(0.0, f64::max);
        // A NaN anywhere must fail the report.
        let finite = self.points.iter().all(|p| p.lhs.is_finite() && p.rhs.is_finite());
        self.pass = finite && self.max_abs_discrepancy <= self.tolerance;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "identity {} {} max_abs_discrepancy={:.3e} tolerance={:.1e} points={}",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.max_abs_discrepancy,
            self.tolerance,
            self.points.len()
        )?;
        if let Some(n) = &self.note {
            writeln!(f, "  note {n}")?;
        }
        for p in &self.points {
            write!(f, " ")?;
            for (k, v) in &p.at {
                write!(f, " {k}={v}")?;
            }
            writeln!(f, " lhs={:.17e} rhs={:.17e} diff={:.3e}", p.lhs, p.rhs, p.discrepancy())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_tolerance() {
        let mut r = IdentityReport::new("demo", 1e-6);
        r.push(&[("x", 0.0)], 1.0, 1.0 + 1e-7);
        assert!(r.pass);
        r.push(&[("x", 1.0)], 1.0, 1.0 + 1e-5);
        assert!(!r.pass);
        assert!((r.max_abs_discrepancy - 1e-5).abs() < 1e-12);
        let r = r.with_tolerance(1e-4);
        assert!(r.pass);
    }

    #[test]
    fn nan_fails() {
        let mut r = IdentityReport::new("demo", 1.0);
        r.push(&[], f64::NAN, 0.0);
        assert!(!r.pass);
    }

    #[test]
    fn json_has_contract_fields() {
        let mut r = IdentityReport::new("demo", 1e-6);
        r.push(&[("x", 0.5)], 0.25, 0.25);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for k in ["name", "points", "max_abs_discrepancy", "tolerance", "pass"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert!(r.to_string().starts_with("identity demo PASS"));
    }
}
