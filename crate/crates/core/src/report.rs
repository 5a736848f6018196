//! Verification records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;

/// One checked inequality instance, oriented so that `margin = lhs − rhs ≥ 0` means it holds.
///
/// Equality checks are expressed the same way with `lhs` the tolerance and `rhs` the observed
/// deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_values: BTreeMap<String, f64>,
    pub margin: f64,
    pub parameters: BTreeMap<String, f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Slack allowed for rounding: `1e−9·max(|lhs|, |rhs|, 1)`.
pub fn report_tolerance(lhs: f64, rhs: f64) -> f64 {
    1e-9 * lhs.abs().max(rhs.abs()).max(1.0)
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        let pass = margin.is_finite() && margin >= -report_tolerance(lhs, rhs);
        Self {
            name: name.into(),
            lhs,
            rhs,
            constant_values: BTreeMap::new(),
            margin,
            parameters: BTreeMap::new(),
            pass,
            notes: Vec::new(),
        }
    }

    /// `deviation ≤ tolerance`, with no rounding slack beyond the tolerance itself.
    pub fn equality(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        let mut r = Self::new(name, tolerance, deviation);
        r.pass = deviation.is_finite() && deviation <= tolerance;
        r
    }

    pub fn constant(mut self, key: &str, value: f64) -> Self {
        self.constant_values.insert(key.to_string(), value);
        self
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn grid(self, g: &GridSpec) -> Self {
        self.param("d", g.d as f64).param("N", g.n_per_axis as f64).param("L", g.half_extent)
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        assert!(InequalityReport::new("a", 1.0, 1.0).pass);
        assert!(InequalityReport::new("a", 1.0, 1.0 + 5e-10).pass);
        assert!(!InequalityReport::new("a", 1.0, 1.0 + 2e-9).pass);
        assert!(InequalityReport::new("a", 1e6, 1e6 * (1.0 + 5e-10)).pass);
        assert!(!InequalityReport::new("a", f64::NAN, 0.0).pass);
        assert!(InequalityReport::equality("e", 1e-11, 1e-10).pass);
        assert!(!InequalityReport::equality("e", 2e-10, 1e-10).pass);
    }

    #[test]
    fn serializes_with_exact_field_names() {
        let r = InequalityReport::new("x", 2.0, 1.0).constant("C_pq", 0.8).param("p", 4.0);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["constant_values", "lhs", "margin", "name", "parameters", "pass", "rhs"]);
    }
}
