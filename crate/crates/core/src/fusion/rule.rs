use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{
    quotient, subtract, EdgeId, Hypergraph, HypergraphError, VertexId, VertexPartition,
};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum FusionError {
    #[error("unknown edge `{0}`")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("edges `{0}` and `{1}` do not carry complementary fusion labels")]
    NotComplementary(EdgeId, EdgeId),
    #[error("edge `{0}` occurs in more than one fusion pair")]
    OverlappingPairs(EdgeId),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// A set `P` of disjoint pairs `{e, ē}` of complementary edges.
///
/// Each pair is stored with its smaller id first; pairs are sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct FusionPairSet {
    pairs: Vec<(EdgeId, EdgeId)>,
}

impl FusionPairSet {
    pub fn new(pairs: impl IntoIterator<Item = (EdgeId, EdgeId)>) -> Self {
        let mut pairs: Vec<(EdgeId, EdgeId)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        pairs.dedup();
        FusionPairSet { pairs }
    }

    pub fn empty() -> Self {
        FusionPairSet::default()
    }

    pub fn pairs(&self) -> &[(EdgeId, EdgeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `∪P`: every edge occurring in a pair.
    pub fn edges(&self) -> BTreeSet<EdgeId> {
        self.pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    /// Checks that every pair is a complementary pair of edges of `h` and that
    /// pairs are disjoint.
    pub fn validate(&self, h: &Hypergraph) -> Result<(), FusionError> {
        let mut seen = BTreeSet::new();
        for (a, b) in &self.pairs {
            let ea = h
                .edge(a)
                .ok_or_else(|| FusionError::UnknownEdge(a.clone()))?;
            let eb = h
                .edge(b)
                .ok_or_else(|| FusionError::UnknownEdge(b.clone()))?;
            if a == b || !ea.label.is_complement_of(&eb.label) {
                return Err(FusionError::NotComplementary(a.clone(), b.clone()));
            }
            for x in [a, b] {
                if !seen.insert(x) {
                    return Err(FusionError::OverlappingPairs(x.clone()));
                }
            }
        }
        Ok(())
    }
}

/// `≡_P`: the least equivalence with `att(e)(i) ≡ att(ē)(i)` for all pairs.
pub fn identification_classes(
    h: &Hypergraph,
    p: &FusionPairSet,
) -> Result<VertexPartition, FusionError> {
    p.validate(h)?;
    let mut glue = Vec::new();
    for (a, b) in p.pairs() {
        let (ea, eb) = (h.edge(a).expect("validated"), h.edge(b).expect("validated"));
        glue.extend(ea.att.iter().cloned().zip(eb.att.iter().cloned()));
    }
    Ok(VertexPartition::from_pairs(
        h.vertices().iter().cloned(),
        glue,
    )?)
}

/// `fr(P)`: removes `∪P` and quotients by `≡_P`.
pub fn apply_parallel_fusion(h: &Hypergraph, p: &FusionPairSet) -> Result<Hypergraph, FusionError> {
    let classes = identification_classes(h, p)?;
    let rest = subtract(h, &BTreeSet::new(), &p.edges())?;
    Ok(quotient(&rest, &classes)?)
}

/// A single fusion rule application.
pub fn apply_fusion(h: &Hypergraph, e: &EdgeId, ebar: &EdgeId) -> Result<Hypergraph, FusionError> {
    apply_parallel_fusion(h, &FusionPairSet::new([(e.clone(), ebar.clone())]))
}
