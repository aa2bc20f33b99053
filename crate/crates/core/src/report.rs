//! The neighborhood report shared by both engines, with its JSON schema and
//! self-validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Geometric,
    Quaternion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbor {
    /// Serialized j-invariant, or a class label for the quaternion engine.
    pub j: String,
    pub multiplicity: usize,
    pub in_prime_field: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodReport {
    pub p: u64,
    pub ell: u64,
    pub vertex_j: String,
    pub loops: usize,
    pub neighbors: Vec<Neighbor>,
    pub distinct_count: usize,
    pub fp_count: usize,
    pub engine: Engine,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("loops + multiplicities = {got}, expected {expected}")]
    DegreeSum { got: usize, expected: usize },
    #[error("distinct_count {got} but {expected} neighbors listed")]
    DistinctCount { got: usize, expected: usize },
    #[error("fp_count {got} but {expected} neighbors flagged")]
    FpCount { got: usize, expected: usize },
    #[error("neighbor {0} listed twice")]
    Duplicate(String),
    #[error("neighbor {0} has multiplicity zero")]
    ZeroMultiplicity(String),
}

/// Which parts of two reports agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub loops: bool,
    pub distinct_count: bool,
    pub multiplicities: bool,
    pub fp_count: bool,
}

impl Agreement {
    pub fn all(&self) -> bool {
        self.loops && self.distinct_count && self.multiplicities && self.fp_count
    }
}

impl NeighborhoodReport {
    pub fn new(
        p: u64,
        ell: u64,
        vertex_j: String,
        loops: usize,
        neighbors: Vec<Neighbor>,
        engine: Engine,
    ) -> Self {
        let distinct_count = neighbors.len();
        let fp_count = neighbors.iter().filter(|n| n.in_prime_field).count();
        NeighborhoodReport {
            p,
            ell,
            vertex_j,
            loops,
            neighbors,
            distinct_count,
            fp_count,
            engine,
        }
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let sum = self.loops + self.neighbors.iter().map(|n| n.multiplicity).sum::<usize>();
        if sum as u64 != self.ell + 1 {
            return Err(ReportError::DegreeSum {
                got: sum,
                expected: self.ell as usize + 1,
            });
        }
        if self.distinct_count != self.neighbors.len() {
            return Err(ReportError::DistinctCount {
                got: self.distinct_count,
                expected: self.neighbors.len(),
            });
        }
        let fp = self.neighbors.iter().filter(|n| n.in_prime_field).count();
        if self.fp_count != fp {
            return Err(ReportError::FpCount {
                got: self.fp_count,
                expected: fp,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for n in &self.neighbors {
            if n.multiplicity == 0 {
                return Err(ReportError::ZeroMultiplicity(n.j.clone()));
            }
            if !seen.insert(&n.j) {
                return Err(ReportError::Duplicate(n.j.clone()));
            }
        }
        Ok(())
    }

    /// Sorted `(multiplicity, in_prime_field)` pairs: the report with vertex
    /// identities forgotten.
    pub fn profile(&self) -> Vec<(usize, bool)> {
        let mut v: Vec<_> = self
            .neighbors
            .iter()
            .map(|n| (n.multiplicity, n.in_prime_field))
            .collect();
        v.sort();
        v
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        let mut v: Vec<_> = self.neighbors.iter().map(|n| n.multiplicity).collect();
        v.sort();
        v
    }

    pub fn compare(&self, other: &NeighborhoodReport) -> Agreement {
        Agreement {
            loops: self.loops == other.loops,
            distinct_count: self.distinct_count == other.distinct_count,
            multiplicities: self.profile() == other.profile(),
            fp_count: self.fp_count == other.fp_count,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> NeighborhoodReport {
        NeighborhoodReport::new(
            103,
            5,
            "1728".into(),
            2,
            vec![
                Neighbor {
                    j: "5+7*t".into(),
                    multiplicity: 2,
                    in_prime_field: false,
                },
                Neighbor {
                    j: "5+96*t".into(),
                    multiplicity: 2,
                    in_prime_field: false,
                },
            ],
            Engine::Geometric,
        )
    }

    #[test]
    fn json_round_trip_and_schema() {
        let r = sample();
        r.validate().unwrap();
        let text = r.to_json();
        let back: NeighborhoodReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        back.validate().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["distinct_count", "ell", "engine", "fp_count", "loops", "neighbors", "p", "vertex_j"]
        );
        assert_eq!(v["engine"], "geometric");
        let n = v["neighbors"][0].as_object().unwrap();
        assert!(n.contains_key("j") && n.contains_key("multiplicity") && n.contains_key("in_prime_field"));
    }

    #[test]
    fn validate_catches_errors() {
        let mut r = sample();
        r.loops = 1;
        assert!(matches!(r.validate(), Err(ReportError::DegreeSum { .. })));
        let mut r = sample();
        r.fp_count = 1;
        assert!(matches!(r.validate(), Err(ReportError::FpCount { .. })));
        let mut r = sample();
        r.distinct_count = 3;
        assert!(matches!(r.validate(), Err(ReportError::DistinctCount { .. })));
        let mut r = sample();
        r.neighbors[1].j = r.neighbors[0].j.clone();
        assert!(matches!(r.validate(), Err(ReportError::Duplicate(_))));
    }

    #[test]
    fn compare_ignores_labels() {
        let a = sample();
        let mut b = sample();
        b.engine = Engine::Quaternion;
        b.neighbors[0].j = "class 1".into();
        assert!(a.compare(&b).all());
        b.neighbors[0].in_prime_field = true;
        b.fp_count = 1;
        let ag = a.compare(&b);
        assert!(ag.loops && ag.distinct_count && !ag.multiplicities && !ag.fp_count);
    }
}
