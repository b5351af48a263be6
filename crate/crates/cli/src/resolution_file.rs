//! JSON serialization of resolution data.
//!
//! ```json
//! {
//!   "components": ["S1", "S2"],
//!   "curves": [
//!     {"name": "C", "intersections": [-1, -1]},
//!     {"name": "F1", "component": "S1", "intersections": [-2, 1]},
//!     {"name": "F2", "component": "S2", "intersections": [1, -2]}
//!   ]
//! }
//! ```
//!
//! Intersection numbers must be integer lexemes; they are parsed at arbitrary
//! precision and never pass through a float.

use std::collections::BTreeSet;
use std::str::FromStr;

use nashcone_core::criterion::{CurveClass, ResolutionData};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionFile {
    pub components: Vec<String>,
    pub curves: Vec<CurveEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    pub intersections: Vec<Number>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid resolution data: {}", .0.join("; "))]
    Validation(Vec<String>),
}

/// Exact integer from a JSON number lexeme; rejects fractions and exponents.
pub fn exact_integer(n: &Number) -> Option<BigInt> {
    let text = n.to_string();
    if text.contains(['.', 'e', 'E']) {
        return None;
    }
    BigInt::from_str(&text).ok()
}

pub fn number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

pub fn parse_resolution_file(text: &str) -> Result<ResolutionData, InputError> {
    let file: ResolutionFile = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_data()
}

impl ResolutionFile {
    pub fn into_data(self) -> Result<ResolutionData, InputError> {
        let mut problems = Vec::new();
        if self.components.is_empty() {
            problems.push("components list is empty".to_string());
        }
        if self.curves.is_empty() {
            problems.push("curves list is empty".to_string());
        }
        for dup in duplicates(self.components.iter()) {
            problems.push(format!("duplicate component name {dup:?}"));
        }
        for dup in duplicates(self.curves.iter().map(|c| &c.name)) {
            problems.push(format!("duplicate curve name {dup:?}"));
        }
        let n = self.components.len();
        let mut curves = Vec::with_capacity(self.curves.len());
        for c in self.curves {
            if c.intersections.len() != n {
                problems.push(format!(
                    "curve {:?} has {} intersection numbers, expected {n}",
                    c.name,
                    c.intersections.len()
                ));
            }
            if let Some(label) = &c.component {
                if !self.components.contains(label) {
                    problems.push(format!("curve {:?} refers to unknown component {label:?}", c.name));
                }
            }
            let mut row = Vec::with_capacity(c.intersections.len());
            for x in &c.intersections {
                match exact_integer(x) {
                    Some(v) => row.push(v),
                    None => problems.push(format!("curve {:?} has non-integer intersection number {x}", c.name)),
                }
            }
            curves.push(CurveClass { name: c.name, component: c.component, intersections: row });
        }
        if !problems.is_empty() {
            return Err(InputError::Validation(problems));
        }
        ResolutionData::new(self.components, curves).map_err(|e| InputError::Validation(vec![e.to_string()]))
    }

    pub fn from_data(data: &ResolutionData) -> Self {
        Self {
            components: data.components().to_vec(),
            curves: data
                .curves()
                .iter()
                .map(|c| CurveEntry {
                    name: c.name.clone(),
                    component: c.component.clone(),
                    intersections: c.intersections.iter().map(number).collect(),
                })
                .collect(),
        }
    }
}

pub fn to_json(data: &ResolutionData) -> String {
    serde_json::to_string_pretty(&ResolutionFile::from_data(data)).expect("serializable")
}

fn duplicates<'a>(names: impl Iterator<Item = &'a String>) -> Vec<&'a String> {
    let mut seen = BTreeSet::new();
    let mut dups = Vec::new();
    for n in names {
        if !seen.insert(n) && !dups.contains(&n) {
            dups.push(n);
        }
    }
    dups
}
