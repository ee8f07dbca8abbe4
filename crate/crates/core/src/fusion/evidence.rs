use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::rule::{FusionError, FusionPairSet};
use crate::hypergraph::{EdgeId, Hypergraph, VertexId};

/// One step `(e_i⁺, k_i⁺), (e_{i+1}⁻, k_{i+1}⁻)` of an evidence path.
/// Positions are 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct EvidenceHop {
    pub plus: (EdgeId, usize),
    pub minus: (EdgeId, usize),
}

/// `v_0, (e_0⁺,k_0⁺), (e_1⁻,k_1⁻), v_1, …, v_l`.
///
/// A degenerate path (`v' = v''`) has one vertex and no hops.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EvidencePath {
    pub vertices: Vec<VertexId>,
    pub hops: Vec<EvidenceHop>,
}

impl EvidencePath {
    /// The path length `l`.
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// The evidence set `{(e_0⁺,k_0⁺), (e_1⁻,k_1⁻), …, (e_l⁻,k_l⁻)}`.
    pub fn evidence_set(&self) -> BTreeSet<(EdgeId, usize)> {
        self.hops
            .iter()
            .flat_map(|h| [h.plus.clone(), h.minus.clone()])
            .collect()
    }

    /// Verifies every defining condition of an evidence path from `from` to
    /// `to` in `h` under `p`; returns the first violated one.
    pub fn check(
        &self,
        h: &Hypergraph,
        p: &FusionPairSet,
        from: &VertexId,
        to: &VertexId,
    ) -> Result<(), String> {
        let l = self.hops.len();
        if self.vertices.len() != l + 1 {
            return Err(format!("{} vertices for {} hops", self.vertices.len(), l));
        }
        if let Some(v) = self.vertices.iter().find(|v| !h.has_vertex(v)) {
            return Err(format!("vertex `{v}` is not in the hypergraph"));
        }
        let distinct: BTreeSet<&VertexId> = self.vertices.iter().collect();
        if distinct.len() != self.vertices.len() {
            return Err("vertices are not distinct".into());
        }
        if &self.vertices[0] != from || &self.vertices[l] != to {
            return Err("endpoints do not match".into());
        }
        if from == to && l != 0 {
            return Err("a path between equal vertices must have length 0".into());
        }
        let pairs: BTreeSet<(&EdgeId, &EdgeId)> = p.pairs().iter().map(|(a, b)| (a, b)).collect();
        for (i, hop) in self.hops.iter().enumerate() {
            let (ep, kp) = (&hop.plus.0, hop.plus.1);
            let (em, km) = (&hop.minus.0, hop.minus.1);
            if !pairs.contains(&(ep, em)) && !pairs.contains(&(em, ep)) {
                return Err(format!("{{{ep}, {em}}} is not a fusion pair"));
            }
            if kp != km {
                return Err(format!("positions {kp} and {km} differ at hop {i}"));
            }
            let att = |e: &EdgeId, k: usize| -> Option<VertexId> {
                let edge = h.edge(e)?;
                k.checked_sub(1).and_then(|k| edge.att.get(k)).cloned()
            };
            if att(ep, kp).as_ref() != Some(&self.vertices[i]) {
                return Err(format!("att({ep})({kp}) is not v_{i}"));
            }
            if att(em, km).as_ref() != Some(&self.vertices[i + 1]) {
                return Err(format!("att({em})({km}) is not v_{}", i + 1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EvidencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices[0])?;
        if self.hops.is_empty() {
            return write!(f, ", {}", self.vertices[0]);
        }
        for (hop, v) in self.hops.iter().zip(&self.vertices[1..]) {
            write!(
                f,
                ", ({},{}), ({},{}), {}",
                hop.plus.0, hop.plus.1, hop.minus.0, hop.minus.1, v
            )?;
        }
        Ok(())
    }
}

/// A shortest evidence path from `v1` to `v2`, found by breadth-first search
/// over the one-step relation `∼_P`; ties go to the smallest ids. `None` iff
/// `v1` and `v2` are not `≡_P`-equivalent.
pub fn evidence_path(
    h: &Hypergraph,
    p: &FusionPairSet,
    v1: &VertexId,
    v2: &VertexId,
) -> Result<Option<EvidencePath>, FusionError> {
    p.validate(h)?;
    for v in [v1, v2] {
        if !h.has_vertex(v) {
            return Err(FusionError::UnknownVertex(v.clone()));
        }
    }
    if v1 == v2 {
        return Ok(Some(EvidencePath {
            vertices: vec![v1.clone()],
            hops: Vec::new(),
        }));
    }

    // Sorted neighbour lists of the step relation.
    let mut steps: BTreeMap<&VertexId, BTreeSet<(&VertexId, EvidenceHop)>> = BTreeMap::new();
    for (a, b) in p.pairs() {
        let (ea, eb) = (h.edge(a).expect("validated"), h.edge(b).expect("validated"));
        for (k, (va, vb)) in ea.att.iter().zip(&eb.att).enumerate() {
            if va == vb {
                continue;
            }
            let pos = k + 1;
            steps.entry(va).or_default().insert((
                vb,
                EvidenceHop {
                    plus: (a.clone(), pos),
                    minus: (b.clone(), pos),
                },
            ));
            steps.entry(vb).or_default().insert((
                va,
                EvidenceHop {
                    plus: (b.clone(), pos),
                    minus: (a.clone(), pos),
                },
            ));
        }
    }

    let mut parent: BTreeMap<&VertexId, (&VertexId, EvidenceHop)> = BTreeMap::new();
    let mut queue = VecDeque::from([v1]);
    let mut seen: BTreeSet<&VertexId> = BTreeSet::from([v1]);
    while let Some(u) = queue.pop_front() {
        if u == v2 {
            break;
        }
        for (w, hop) in steps.get(u).into_iter().flatten() {
            if seen.insert(w) {
                parent.insert(w, (u, hop.clone()));
                queue.push_back(w);
            }
        }
    }
    if !seen.contains(v2) {
        return Ok(None);
    }
    let mut vertices = vec![v2.clone()];
    let mut hops = Vec::new();
    let mut cur = v2;
    while cur != v1 {
        let (prev, hop) = &parent[cur];
        hops.push(hop.clone());
        vertices.push((*prev).clone());
        cur = prev;
    }
    vertices.reverse();
    hops.reverse();
    Ok(Some(EvidencePath { vertices, hops }))
}
