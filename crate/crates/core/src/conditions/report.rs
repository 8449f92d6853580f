//! Report types shared by every statistical verifier.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One grid cell of a bound check: parameters, measured left side,
/// theoretical right side and the Monte Carlo standard error of the
/// left side (zero for deterministic evaluations).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheckEntry {
    /// Named parameters of this cell, e.g. `[("t", 0.25), ("r", 0.125)]`.
    pub params: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub std_err: f64,
}

/// Outcome of one hypothesis check over a parameter grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheckReport {
    /// Which check produced this report.
    pub check: String,
    /// Human-readable description of the process/spec under test.
    pub spec: String,
    pub entries: Vec<BoundCheckEntry>,
    /// Indices into `entries` that violate the bound beyond the 3-sigma
    /// Monte Carlo allowance.
    pub violations: Vec<usize>,
    /// Fitted constants (e.g. the minimal `C` making all cells pass).
    pub fitted_constants: BTreeMap<String, f64>,
    /// Free-form diagnostics (saturation flags, weak-decay warnings, ...).
    pub notes: Vec<String>,
}

impl BoundCheckReport {
    pub fn new(check: impl Into<String>, spec: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            spec: spec.into(),
            entries: Vec::new(),
            violations: Vec::new(),
            fitted_constants: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push_constant(&mut self, name: impl Into<String>, value: f64) {
        self.fitted_constants.insert(name.into(), value);
    }

    /// Flatten to CSV rows of `param1,param2,...,lhs,rhs,std_err,violating`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.entries.first() {
            for (name, _) in &first.params {
                out.push_str(name);
                out.push(',');
            }
            out.push_str("lhs,rhs,std_err,violating\n");
        }
        for (i, e) in self.entries.iter().enumerate() {
            for (_, v) in &e.params {
                out.push_str(&format!("{v},"));
            }
            let bad = self.violations.contains(&i);
            out.push_str(&format!("{},{},{},{}\n", e.lhs, e.rhs, e.std_err, bad));
        }
        out
    }
}
