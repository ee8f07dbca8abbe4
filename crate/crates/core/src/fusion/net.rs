use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::rule::{FusionError, FusionPairSet};
use crate::hypergraph::{component_assignment, EdgeId, Hypergraph};

/// One net edge: a fused pair and the components hosting its two edges.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NetEdge {
    pub pair: (EdgeId, EdgeId),
    pub ends: (usize, usize),
}

/// Undirected, unlabelled multigraph on the components of the pre-fusion
/// hypergraph; a pair inside one component is a loop.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FusionNet {
    pub components: usize,
    pub edges: Vec<NetEdge>,
}

impl FusionNet {
    pub fn is_connected(&self) -> bool {
        if self.components == 0 {
            return false;
        }
        let mut uf = UnionFind::<usize>::new(self.components);
        for e in &self.edges {
            uf.union(e.ends.0, e.ends.1);
        }
        (1..self.components).all(|c| uf.equiv(0, c))
    }
}

pub fn fusion_net(h: &Hypergraph, p: &FusionPairSet) -> Result<FusionNet, FusionError> {
    p.validate(h)?;
    let (_, edge_comp, components) = component_assignment(h);
    let comp = |e: &EdgeId| edge_comp[h.edge_index(e).expect("validated")];
    let edges = p
        .pairs()
        .iter()
        .map(|(a, b)| NetEdge {
            pair: (a.clone(), b.clone()),
            ends: (comp(a), comp(b)),
        })
        .collect();
    Ok(FusionNet { components, edges })
}
