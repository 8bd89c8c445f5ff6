//! JSON manifold descriptions.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "E4",
//!   "euler": 48,
//!   "signature": -32,
//!   "lattice": "4E8+7H",
//!   "basic_classes": [{ "K": [0, 0, 2, 0], "sw": "1" }],
//!   "w": [0, 0, 0, 0]
//! }
//! ```
//!
//! `lattice` is either a lattice name accepted by
//! [`IntersectionLattice::named`] or an explicit Gram matrix. `sw` may be a
//! JSON integer or a decimal string; the canonical form writes strings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{BasicClassTable, FourManifold, ManifoldError, Violation};
use crate::lattice::{to_i64, CohClass, IntersectionLattice};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Named(String),
    Gram(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SwValue {
    Text(String),
    Number(i64),
}

impl SwValue {
    fn parse(&self) -> Option<BigInt> {
        match self {
            SwValue::Text(s) => s.trim().parse().ok(),
            SwValue::Number(n) => Some(BigInt::from(*n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicClassEntry {
    #[serde(rename = "K")]
    pub k: Vec<i64>,
    pub sw: SwValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDocument {
    pub schema: u32,
    pub name: String,
    pub euler: i64,
    pub signature: i64,
    pub lattice: LatticeSpec,
    pub basic_classes: Vec<BasicClassEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<i64>>,
}

impl ManifoldDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

fn class_ints(k: &CohClass) -> Vec<i64> {
    k.coords()
        .iter()
        .map(|x| to_i64(x).expect("stored classes are integral and fit in i64"))
        .collect()
}

impl FourManifold {
    pub fn to_document(&self) -> ManifoldDocument {
        let lattice = match self.lattice.descriptor() {
            Some(d) => LatticeSpec::Named(d.to_string()),
            None => LatticeSpec::Gram(self.lattice.gram().to_vec()),
        };
        ManifoldDocument {
            schema: SCHEMA_VERSION,
            name: self.name.clone(),
            euler: self.euler,
            signature: self.signature,
            lattice,
            basic_classes: self
                .sw
                .iter()
                .map(|(k, v)| BasicClassEntry {
                    k: class_ints(k),
                    sw: SwValue::Text(v.to_string()),
                })
                .collect(),
            w: self.w.as_ref().map(class_ints),
        }
    }

    /// Canonical JSON: pretty-printed, classes in table order, SW′ values as
    /// decimal strings.
    pub fn to_canonical_json(&self) -> String {
        self.to_document().to_json()
    }
}

/// Parses and validates a document, collecting every violation before
/// rejecting it.
pub fn load_document(text: &str) -> Result<FourManifold, ManifoldError> {
    let doc: ManifoldDocument = serde_json::from_str(text)
        .map_err(|e| ManifoldError::Invalid(vec![Violation::new("$", format!("malformed document: {e}"))]))?;
    doc.validate()
}

impl ManifoldDocument {
    pub fn validate(&self) -> Result<FourManifold, ManifoldError> {
        let mut violations = Vec::new();
        if self.schema != SCHEMA_VERSION {
            violations.push(Violation::new(
                "schema",
                format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema),
            ));
        }
        let lattice = match &self.lattice {
            LatticeSpec::Named(d) => IntersectionLattice::named(d),
            LatticeSpec::Gram(g) => IntersectionLattice::from_gram(g.clone()),
        };
        let lattice = match lattice {
            Ok(l) => Some(l),
            Err(e) => {
                violations.push(Violation::new("lattice", e.to_string()));
                None
            }
        };

        let mut table = BasicClassTable::new();
        let mut seen = BTreeSet::new();
        for (idx, entry) in self.basic_classes.iter().enumerate() {
            let path = format!("basic_classes[{idx}]");
            let Some(v) = entry.sw.parse() else {
                violations.push(Violation::new(format!("{path}.sw"), "not an integer"));
                continue;
            };
            if v.is_zero() {
                violations.push(Violation::new(format!("{path}.sw"), "zero is not a basic class value"));
                continue;
            }
            if !seen.insert(entry.k.clone()) {
                violations.push(Violation::new(format!("{path}.K"), "duplicate class"));
                continue;
            }
            table.insert(CohClass::from_ints(&entry.k), v);
        }

        let Some(lattice) = lattice else {
            return Err(ManifoldError::Invalid(violations));
        };
        let m = FourManifold {
            name: self.name.clone(),
            euler: self.euler,
            signature: self.signature,
            lattice,
            sw: table,
            w: self.w.as_deref().map(CohClass::from_ints),
        };
        let structural = m.structural_violations();
        let structural_ok = structural.is_empty();
        violations.extend(structural);
        if structural_ok && !m.sw_symmetry_check() {
            violations.push(Violation::new(
                "basic_classes",
                "table is not symmetric: SW'(-K) must equal (-1)^chi_h SW'(K)",
            ));
        }
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(ManifoldError::Invalid(violations))
        }
    }
}
