//! Machine-readable check reports.

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::scalar::{rat_to_f64, ratio_json};

/// Bumped whenever the report layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one verification, serialized as
/// `{check, paper_eq, inputs, lhs, rhs, exact, pass, witness}` plus optional
/// `model` and `tolerance` fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    /// Equation label of the inequality or identity being checked.
    #[serde(rename = "paper_eq")]
    pub equation: String,
    pub inputs: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub exact: bool,
    pub pass: bool,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, equation: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            equation: equation.into(),
            inputs: Value::Null,
            lhs: Value::Null,
            rhs: Value::Null,
            exact: true,
            pass: false,
            witness: Value::Null,
            model: None,
            tolerance: None,
        }
    }

    pub fn inputs(mut self, inputs: Value) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn sides(mut self, lhs: Value, rhs: Value) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self
    }

    pub fn witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    /// Marks a floating-point matrix-model result.
    pub fn matrix_model(mut self, tolerance: f64) -> Self {
        self.model = Some("matrix-model".into());
        self.exact = false;
        self.tolerance = Some(tolerance);
        self
    }
}

/// An exact rational as `{"exact": [num, den], "approx": f64}`.
pub fn rational_value(r: &BigRational) -> Value {
    json!({ "exact": ratio_json(r), "approx": rat_to_f64(r) })
}

/// A certified bracket `[lo, hi]` of exact rationals.
pub fn bracket_value(lo: &BigRational, hi: &BigRational) -> Value {
    if lo == hi {
        rational_value(lo)
    } else {
        json!({
            "lower": ratio_json(lo),
            "upper": ratio_json(hi),
            "approx": rat_to_f64(lo),
        })
    }
}

/// A collection of checks sorted by name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64, config: Value, mut checks: Vec<CheckReport>) -> SuiteReport {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            seed,
            config,
            pass,
            checks,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One row per check: `check,paper_eq,exact,pass,lhs,rhs`, with the
    /// approximate value of each side when present and its JSON otherwise.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let cell = |v: &Value| match v.get("approx") {
            Some(a) => a.to_string(),
            None => v.to_string(),
        };
        w.write_record(["check", "paper_eq", "exact", "pass", "lhs", "rhs"])
            .expect("in-memory write");
        for c in &self.checks {
            w.write_record([
                c.check.clone(),
                c.equation.clone(),
                c.exact.to_string(),
                c.pass.to_string(),
                cell(&c.lhs),
                cell(&c.rhs),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}
