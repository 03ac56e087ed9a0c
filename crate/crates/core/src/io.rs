//! JSON documents read and written by the command-line tool.
//!
//! A query file looks like
//!
//! ```json
//! {
//!   "lattice": {"labels": ["D", "L"], "gram": [[4, 5], [5, 2]]},
//!   "query": {
//!     "self_intersection": -2,
//!     "pairings": [{"anchor": "D", "relation": "eq", "value": 0}]
//!   }
//! }
//! ```
//!
//! Anchors are either a basis label or `{"coords": [...]}`. Relations are
//! `eq`, `le`, `ge` (with `value`) or `range` (with `range: [lo, hi]`). An
//! optional `box` gives the half-width for brute-force scans.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::Certificate;
use crate::enumerate::{ClassQuery, EnumerationResult, Relation};
use crate::family::LatticeFamilyParams;
use crate::json_int::{to_json_vec, JsonInt};
use crate::lattice::{DivisorClass, IntLattice, LatticeError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub gram: Vec<Vec<JsonInt>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub coords: Vec<JsonInt>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnchorSpec {
    Label(String),
    Class(ClassSpec),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Eq,
    Le,
    Ge,
    Range,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSpec {
    pub anchor: AnchorSpec,
    pub relation: RelationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[JsonInt; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub self_intersection: JsonInt,
    #[serde(default)]
    pub pairings: Vec<PairingSpec>,
    #[serde(default)]
    pub primitive_only: bool,
    #[serde(default)]
    pub exclude: Vec<ClassSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub lattice: LatticeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<ClassSpec>,
    pub query: QuerySpec,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub half_width: Option<u32>,
}

/// A query file resolved against its lattice.
#[derive(Debug, Clone)]
pub struct LoadedQuery {
    pub lattice: IntLattice,
    pub ample: Option<DivisorClass>,
    pub query: ClassQuery,
    pub half_width: Option<u32>,
}

impl LatticeSpec {
    pub fn from_lattice(l: &IntLattice) -> Self {
        LatticeSpec {
            labels: Some(l.labels().to_vec()),
            gram: l.gram().iter().map(|r| to_json_vec(r)).collect(),
        }
    }

    pub fn build(&self) -> Result<IntLattice, IoError> {
        let gram: Vec<Vec<BigInt>> = self.gram.iter().map(|r| r.iter().map(|v| v.0.clone()).collect()).collect();
        let labels = match &self.labels {
            Some(l) => l.clone(),
            None => (0..gram.len()).map(|i| format!("e{i}")).collect(),
        };
        Ok(IntLattice::new(labels, gram)?)
    }
}

impl ClassSpec {
    pub fn from_class(c: &DivisorClass) -> Self {
        ClassSpec { coords: to_json_vec(c.coords()) }
    }

    pub fn build(&self, lattice: &IntLattice) -> Result<DivisorClass, IoError> {
        let c = DivisorClass::new(self.coords.iter().map(|v| v.0.clone()).collect());
        lattice.check_dim(&c)?;
        Ok(c)
    }
}

impl QueryFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|source| IoError::Json { path: path.to_string(), source })
    }

    pub fn load(path: &Path) -> Result<LoadedQuery, IoError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| IoError::Read { path: shown.clone(), source })?;
        Self::parse(&text, &shown)?.resolve()
    }

    pub fn resolve(&self) -> Result<LoadedQuery, IoError> {
        let lattice = self.lattice.build()?;
        let ample = self.ample.as_ref().map(|a| a.build(&lattice)).transpose()?;
        let mut q = ClassQuery::new(self.query.self_intersection.0.clone());
        for (i, p) in self.query.pairings.iter().enumerate() {
            let anchor = match &p.anchor {
                AnchorSpec::Label(l) => lattice.class_by_label(l)?,
                AnchorSpec::Class(c) => c.build(&lattice)?,
            };
            let value = || {
                p.value.as_ref().map(|v| v.0.clone()).ok_or_else(|| {
                    IoError::Schema(format!("query.pairings[{i}]: relation needs field `value`"))
                })
            };
            let relation = match p.relation {
                RelationKind::Eq => Relation::Eq(value()?),
                RelationKind::Le => Relation::Le(value()?),
                RelationKind::Ge => Relation::Ge(value()?),
                RelationKind::Range => {
                    let [lo, hi] = p.range.clone().ok_or_else(|| {
                        IoError::Schema(format!("query.pairings[{i}]: relation `range` needs field `range`"))
                    })?;
                    Relation::Range(lo.0, hi.0)
                }
            };
            q = q.with(&anchor, relation);
        }
        if self.query.primitive_only {
            q = q.primitive();
        }
        for c in &self.query.exclude {
            q = q.excluding(&c.build(&lattice)?);
        }
        Ok(LoadedQuery { lattice, ample, query: q, half_width: self.half_width })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionOut {
    pub coords: Vec<JsonInt>,
    pub class: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationOut {
    pub query: String,
    pub count: usize,
    pub solutions: Vec<SolutionOut>,
    pub bound: crate::enumerate::CompletenessBound,
    pub nodes: u64,
}

impl EnumerationOut {
    pub fn new(lattice: &IntLattice, q: &ClassQuery, r: &EnumerationResult) -> Self {
        EnumerationOut {
            query: q.describe(lattice),
            count: r.solutions.len(),
            solutions: r
                .solutions
                .iter()
                .map(|c| SolutionOut { coords: to_json_vec(c.coords()), class: lattice.format_class(c) })
                .collect(),
            bound: r.bound.clone(),
            nodes: r.stats.nodes,
        }
    }
}

/// Output of building a family: usable as the `lattice`/`ample` part of a
/// query file.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyOut {
    pub params: LatticeFamilyParams,
    pub lattice: LatticeSpec,
    pub ample: ClassSpec,
    pub disc: JsonInt,
    pub signature: [usize; 2],
    pub certificate: Certificate,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let text = r#"{
            "lattice": {"labels": ["D", "L"], "gram": [[4, 5], [5, 2]]},
            "query": {"self_intersection": -2,
                      "pairings": [{"anchor": "D", "relation": "eq", "value": 0},
                                   {"anchor": {"coords": [0, 1]}, "relation": "range", "range": [-3, "3"]}]}
        }"#;
        let q = QueryFile::parse(text, "t").unwrap().resolve().unwrap();
        assert_eq!(q.lattice.discriminant(), &BigInt::from(-17));
        assert_eq!(q.query.pairings.len(), 2);
        assert!(q.ample.is_none());
    }

    #[test]
    fn names_offending_fields() {
        let e = QueryFile::parse(r#"{"lattice": {"labels": ["a"]}, "query": {"self_intersection": 0}}"#, "t");
        assert!(e.unwrap_err().to_string().contains("gram"));
        let e = QueryFile::parse(r#"{"lattice": {"gram": [[2]]}, "query": {"self_intersection": 0, "paring": []}}"#, "t");
        assert!(e.unwrap_err().to_string().contains("paring"));
        let text = r#"{"lattice": {"gram": [[2, 0], [0, -2]]},
                       "query": {"self_intersection": -2, "pairings": [{"anchor": "e0", "relation": "eq"}]}}"#;
        let e = QueryFile::parse(text, "t").unwrap().resolve().unwrap_err();
        assert!(e.to_string().contains("value"));
    }
}
