use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Classification,
    Family,
    Annulus,
    Catenoid,
    Balancing,
    Verification,
}

/// How a measured value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `None` when the measurement was not finite.
    pub measured: Option<f64>,
    pub relation: Relation,
    pub threshold: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, relation: Relation, threshold: f64) -> Self {
        let passed = match relation {
            Relation::Below => measured < threshold,
            Relation::Above => measured > threshold,
            Relation::AtLeast => measured >= threshold,
        };
        Check { name: name.into(), passed, measured: measured.is_finite().then_some(measured), relation, threshold }
    }

    pub fn below(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Check::new(name, measured, Relation::Below, threshold)
    }

    /// A yes/no property, recorded as `1 > 0.5` or `0 > 0.5`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, if ok { 1.0 } else { 0.0 }, Relation::Above, 0.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub kind: ReportKind,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl ReportDocument {
    pub fn new(kind: ReportKind) -> Self {
        ReportDocument { schema: 1, kind, parameters: BTreeMap::new(), results: BTreeMap::new(), checks: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// Non-finite floats are stored as `null`.
    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
