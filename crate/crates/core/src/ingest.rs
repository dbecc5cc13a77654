//! Stratified simplicial complexes and their face posets.
//!
//! A simplex is labelled by the largest stratum among its vertices, which
//! makes the labelling monotone for face inclusion. Simplices whose vertex
//! labels have no maximum are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::ChainComplex;
use crate::diagram::{DiagramJson, StratDiagram};
use crate::error::{Error, Result};
use crate::field::Q;
use crate::poset::{FinPoset, MonotoneMap, PosetJson, Subposet};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexJson {
    pub id: String,
    pub stratum: String,
}

/// Wire format. Only maximal simplices need to be listed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplicialJson {
    pub strata_poset: PosetJson,
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub simplices: Vec<Vec<String>>,
}

/// A face-closed simplicial complex with vertex labels in a poset.
#[derive(Clone, Debug)]
pub struct StratSimplicialComplex {
    strata: Arc<FinPoset>,
    vertex_ids: Vec<String>,
    labels: Vec<usize>,
    /// Sorted vertex index sets, by dimension then lexicographically.
    simplices: Vec<Vec<usize>>,
}

impl StratSimplicialComplex {
    pub fn from_json(j: &SimplicialJson) -> Result<Self> {
        let strata = Arc::new(FinPoset::from_json(&j.strata_poset)?);
        let mut index = BTreeMap::new();
        let mut vertex_ids = Vec::new();
        let mut labels = Vec::new();
        for v in &j.vertices {
            if index.insert(v.id.clone(), vertex_ids.len()).is_some() {
                return Err(Error::DuplicateElement(v.id.clone()));
            }
            vertex_ids.push(v.id.clone());
            labels.push(strata.index_of(&v.stratum)?);
        }
        let mut faces: BTreeSet<Vec<usize>> = (0..vertex_ids.len()).map(|v| vec![v]).collect();
        for s in &j.simplices {
            let mut vs = s
                .iter()
                .map(|v| index.get(v).copied().ok_or_else(|| Error::UnknownElement(v.clone())))
                .collect::<Result<Vec<_>>>()?;
            vs.sort_unstable();
            vs.dedup();
            if vs.len() > 20 {
                return Err(Error::Parse(format!("simplex {s:?} has more than 20 vertices")));
            }
            for mask in 1u32..(1 << vs.len()) {
                let face: Vec<usize> = (0..vs.len())
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| vs[b])
                    .collect();
                faces.insert(face);
            }
        }
        let mut simplices: Vec<Vec<usize>> = faces.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(StratSimplicialComplex {
            strata,
            vertex_ids,
            labels,
            simplices,
        })
    }

    pub fn strata(&self) -> &Arc<FinPoset> {
        &self.strata
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Vertex ids joined by `-`; a vertex keeps its own id.
    pub fn simplex_name(&self, s: &[usize]) -> String {
        s.iter()
            .map(|&v| self.vertex_ids[v].as_str())
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Alternating count of simplices by dimension.
    pub fn euler_char(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    fn label(&self, s: &[usize]) -> Result<usize> {
        let p = &self.strata;
        s.iter()
            .map(|&v| self.labels[v])
            .find(|&m| s.iter().all(|&v| p.leq(self.labels[v], m)))
            .ok_or_else(|| {
                Error::IncompatibleStratification(s.iter().map(|&v| self.vertex_ids[v].clone()).collect())
            })
    }

    /// Face poset ordered by inclusion, with the maximum-label stratification.
    pub fn face_poset(&self) -> Result<MonotoneMap> {
        let values = self
            .simplices
            .iter()
            .map(|s| self.label(s))
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<String> = self.simplices.iter().map(|s| self.simplex_name(s)).collect();
        let position: BTreeMap<&[usize], usize> = self
            .simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        // codimension-one faces generate the order
        let mut rels = Vec::new();
        for (i, s) in self.simplices.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                rels.push((position[face.as_slice()], i));
            }
        }
        let rels: Vec<(&str, &str)> = rels
            .iter()
            .map(|&(a, b)| (names[a].as_str(), names[b].as_str()))
            .collect();
        let shape = FinPoset::new(&names, &rels)?;
        MonotoneMap::new(Arc::new(shape), self.strata.clone(), values)
    }
}

/// Shape diagnostics of one stratum's fibre.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FiberReport {
    pub stratum: String,
    pub elements: Vec<String>,
    pub euler_char: i64,
    pub components: usize,
}

/// The fibre `s^{-1}(p)` with its nerve Euler characteristic and number of
/// connected components.
pub fn stratum_fiber(s: &MonotoneMap, p: usize) -> (Subposet, FiberReport) {
    let fiber = s.fiber(p);
    let sub = s.source().full_subposet(&fiber);
    let report = FiberReport {
        stratum: s.target().id(p).to_string(),
        elements: fiber.ids(s.source()).iter().map(|x| x.to_string()).collect(),
        euler_char: sub.nerve_euler_char(),
        components: sub.components(),
    };
    (fiber, report)
}

/// Output of ingestion: the constant diagram on the face poset (a
/// ready-to-use input for the other commands) plus fibre diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IngestReport {
    pub diagram: DiagramJson,
    pub fibers: Vec<FiberReport>,
    pub simplex_euler_char: i64,
    pub nerve_euler_char: i64,
}

pub fn ingest(j: &SimplicialJson) -> Result<IngestReport> {
    let k = StratSimplicialComplex::from_json(j)?;
    let s = k.face_poset()?;
    let fibers = (0..s.target().len()).map(|p| stratum_fiber(&s, p).1).collect();
    let diagram = StratDiagram::<Q>::constant(s.clone(), &ChainComplex::unit()).to_json();
    Ok(IngestReport {
        diagram,
        fibers,
        simplex_euler_char: k.euler_char(),
        nerve_euler_char: s.source().nerve_euler_char(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> SimplicialJson {
        serde_json::from_str(s).unwrap()
    }

    fn interval() -> SimplicialJson {
        parse(
            r#"{"strata_poset": {"elements": ["0", "1"], "leq": [["0", "1"]]},
                "vertices": [{"id": "v0", "stratum": "0"}, {"id": "v1", "stratum": "1"}],
                "simplices": [["v0", "v1"]]}"#,
        )
    }

    #[test]
    fn interval_face_poset() {
        let s = StratSimplicialComplex::from_json(&interval()).unwrap().face_poset().unwrap();
        let c = s.source();
        assert_eq!(c.ids(), ["v0", "v1", "v0-v1"]);
        assert!(c.lt(0, 2) && c.lt(1, 2) && !c.leq(0, 1));
        assert_eq!(s.values(), [0, 1, 1]);
        let (f0, r0) = stratum_fiber(&s, 0);
        assert_eq!(f0.members(), [0]);
        assert_eq!((r0.euler_char, r0.components), (1, 1));
        let (_, r1) = stratum_fiber(&s, 1);
        assert_eq!(r1.elements, ["v1", "v0-v1"]);
        assert_eq!((r1.euler_char, r1.components), (1, 1));
    }

    #[test]
    fn trivially_stratified_circle() {
        let j = parse(
            r#"{"strata_poset": {"elements": ["*"]},
                "vertices": [{"id": "a", "stratum": "*"}, {"id": "b", "stratum": "*"}, {"id": "c", "stratum": "*"}],
                "simplices": [["a", "b"], ["b", "c"], ["a", "c"]]}"#,
        );
        let s = StratSimplicialComplex::from_json(&j).unwrap().face_poset().unwrap();
        assert!(s.values().iter().all(|&v| v == 0));
        let (f, r) = stratum_fiber(&s, 0);
        assert_eq!(f.len(), 6);
        assert_eq!(r.euler_char, 0);
    }

    #[test]
    fn incomparable_labels_are_rejected() {
        let j = parse(
            r#"{"strata_poset": {"elements": ["a", "b"]},
                "vertices": [{"id": "x", "stratum": "a"}, {"id": "y", "stratum": "b"}],
                "simplices": [["x", "y"]]}"#,
        );
        let err = StratSimplicialComplex::from_json(&j).unwrap().face_poset().unwrap_err();
        assert!(matches!(err, Error::IncompatibleStratification(_)));
    }

    #[test]
    fn empty_fiber() {
        let j = parse(
            r#"{"strata_poset": {"elements": ["0", "1"], "leq": [["0", "1"]]},
                "vertices": [{"id": "v", "stratum": "1"}]}"#,
        );
        let s = StratSimplicialComplex::from_json(&j).unwrap().face_poset().unwrap();
        let (f, r) = stratum_fiber(&s, 0);
        assert!(f.is_empty());
        assert_eq!((r.euler_char, r.components), (0, 0));
    }

    #[test]
    fn filled_triangle_euler_chars_agree_and_closed_strata_are_closed() {
        let j = parse(
            r#"{"strata_poset": {"elements": ["0", "1", "2"], "leq": [["0", "1"], ["1", "2"]]},
                "vertices": [{"id": "a", "stratum": "0"}, {"id": "b", "stratum": "1"}, {"id": "c", "stratum": "2"}],
                "simplices": [["a", "b", "c"]]}"#,
        );
        let k = StratSimplicialComplex::from_json(&j).unwrap();
        assert_eq!(k.simplices().len(), 7);
        let s = k.face_poset().unwrap();
        assert_eq!(k.euler_char(), 1);
        assert_eq!(s.source().nerve_euler_char(), 1);
        for p in 0..3 {
            let down = s.target().subposet((0..3).filter(|&q| s.target().leq(q, p))).unwrap();
            assert!(s.source().is_closed(&s.preimage(&down)).unwrap());
        }
    }

    #[test]
    fn ingest_report_round_trips_into_a_valid_diagram() {
        let r = ingest(&interval()).unwrap();
        let d = StratDiagram::<Q>::from_json(&r.diagram).unwrap();
        assert!(d.validate().valid);
        assert_eq!(d.strat().values(), [0, 1, 1]);
    }
}
