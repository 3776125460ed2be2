use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Default relative slack applied to every inequality check.
pub const CHECK_TOL: f64 = 1e-9;

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    /// `margin ≥ −tolerance · scale`.
    pub passed: bool,
    pub tolerance: f64,
    /// Grid time of the reported (worst) instance, for time-resolved checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, scale: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            passed: margin >= -tolerance * scale.abs() && !margin.is_nan(),
            tolerance,
            at: None,
        }
    }

    /// Inequality with the default relative slack on `max(|lhs|, |rhs|)`.
    pub fn relative(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, CHECK_TOL, lhs.abs().max(rhs.abs()))
    }

    pub fn at(mut self, t: f64) -> Self {
        self.at = Some(t);
        self
    }

    /// Slack-adjusted margin; the most negative instance is the worst.
    fn excess(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale > 0.0 {
            self.margin / scale
        } else {
            0.0
        }
    }

    /// Collapses a time series of instances to the worst one; it passes
    /// only if every instance passes.
    pub fn worst(name: &str, instances: impl IntoIterator<Item = Check>) -> Option<Check> {
        let mut all_passed = true;
        let mut worst: Option<Check> = None;
        for c in instances {
            all_passed &= c.passed;
            let replace = match &worst {
                None => true,
                Some(w) => (!c.passed && w.passed) || (c.passed == w.passed && c.excess() < w.excess()),
            };
            if replace {
                worst = Some(c);
            }
        }
        worst.map(|mut w| {
            w.name = name.to_string();
            w.passed = all_passed;
            w
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Summary status: every check passed.
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub safety_factor: Option<f64>,
    #[serde(default)]
    pub context: BTreeMap<String, String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(kind: &str) -> Self {
        let mut context = BTreeMap::new();
        context.insert("kind".to_string(), kind.to_string());
        Self { passed: true, ..Self::default() }.with_context_map(context)
    }

    fn with_context_map(mut self, context: BTreeMap<String, String>) -> Self {
        self.context = context;
        self
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn context(&mut self, key: &str, value: impl ToString) {
        self.context.insert(key.to_string(), value.to_string());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
        self.notes.extend(other.notes);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_applies_to_scale() {
        assert!(Check::new("a", 1.0 + 1e-10, 1.0, 1e-9, 1.0).passed);
        assert!(!Check::new("a", 1.0 + 1e-8, 1.0, 1e-9, 1.0).passed);
        assert!(Check::new("a", 0.0, 0.0, 0.0, 0.0).passed);
        assert!(!Check::new("a", f64::NAN, 0.0, 1.0, 1.0).passed);
    }

    #[test]
    fn worst_prefers_failures() {
        let w = Check::worst(
            "w",
            vec![
                Check::relative("x", 0.5, 1.0).at(0.0),
                Check::relative("x", 2.0, 1.0).at(1.0),
                Check::relative("x", 0.9, 1.0).at(2.0),
            ],
        )
        .unwrap();
        assert!(!w.passed);
        assert_eq!(w.at, Some(1.0));
    }

    #[test]
    fn summary_tracks_pushes() {
        let mut r = VerificationReport::new("t");
        r.push(Check::relative("ok", 0.0, 1.0));
        assert!(r.passed);
        r.push(Check::relative("bad", 2.0, 1.0));
        assert!(!r.passed);
        assert_eq!(r.failed().count(), 1);
    }
}
