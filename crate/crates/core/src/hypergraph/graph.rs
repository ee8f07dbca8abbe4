use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use super::ids::{EdgeId, VertexId};
use super::label::Label;

/// What a hypergraph needs from its edge labels.
pub trait EdgeLabel: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {
    fn arity(&self) -> usize;
}

impl EdgeLabel for Label {
    fn arity(&self) -> usize {
        Label::arity(self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Edge<L = Label> {
    pub id: EdgeId,
    pub label: L,
    pub att: Vec<VertexId>,
}

impl<L> Edge<L> {
    pub fn new(id: impl Into<EdgeId>, label: L, att: impl IntoIterator<Item = VertexId>) -> Self {
        Edge {
            id: id.into(),
            label,
            att: att.into_iter().collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum HypergraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("edge `{edge}` has {found} attachment vertices but its label has arity {expected}")]
    ArityMismatch {
        edge: EdgeId,
        expected: usize,
        found: usize,
    },
    #[error("edge `{edge}` is attached to unknown vertex `{vertex}`")]
    UnknownAttachment { edge: EdgeId, vertex: VertexId },
    #[error("vertex `{vertex}` is removed but still attached to kept edge `{edge}`")]
    DanglingAttachment { vertex: VertexId, edge: EdgeId },
    #[error("multiplicity has {found} entries but the hypergraph has {expected} components")]
    MultiplicityDomain { expected: usize, found: usize },
    #[error("unknown edge `{0}`")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
}

/// A finite hypergraph `(V, E, att, lab)`.
///
/// Vertices and edges are kept sorted by id, which fixes every traversal order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph<L = Label> {
    vertices: Vec<VertexId>,
    edges: Vec<Edge<L>>,
}

impl<L: EdgeLabel> Default for Hypergraph<L> {
    fn default() -> Self {
        Hypergraph::empty()
    }
}

impl<L: EdgeLabel> Hypergraph<L> {
    pub fn empty() -> Self {
        Hypergraph {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge<L>>,
    ) -> Result<Self, HypergraphError> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateVertex(w[0].clone()));
        }
        let mut edges: Vec<Edge<L>> = edges.into_iter().collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(HypergraphError::DuplicateEdge(w[0].id.clone()));
        }
        for e in &edges {
            if e.att.len() != e.label.arity() {
                return Err(HypergraphError::ArityMismatch {
                    edge: e.id.clone(),
                    expected: e.label.arity(),
                    found: e.att.len(),
                });
            }
            if let Some(v) = e.att.iter().find(|v| vertices.binary_search(v).is_err()) {
                return Err(HypergraphError::UnknownAttachment {
                    edge: e.id.clone(),
                    vertex: v.clone(),
                });
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Construction from parts already known to be valid and sorted.
    pub(crate) fn from_sorted_unchecked(vertices: Vec<VertexId>, edges: Vec<Edge<L>>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.windows(2).all(|w| w[0].id < w[1].id));
        Hypergraph { vertices, edges }
    }

    pub fn builder() -> HypergraphBuilder<L> {
        HypergraphBuilder::default()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge<L>] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|H| = |V_H| + |E_H|`.
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertex_index(&self, v: &VertexId) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn edge_index(&self, e: &EdgeId) -> Option<usize> {
        self.edges.binary_search_by(|x| x.id.cmp(e)).ok()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&Edge<L>> {
        self.edge_index(e).map(|i| &self.edges[i])
    }

    /// `#_a(H)`.
    pub fn count_label(&self, label: &L) -> usize {
        self.edges.iter().filter(|e| &e.label == label).count()
    }

    /// Number of edges whose label satisfies `pred`.
    pub fn count_where(&self, mut pred: impl FnMut(&L) -> bool) -> usize {
        self.edges.iter().filter(|e| pred(&e.label)).count()
    }

    /// Distinct labels in use.
    pub fn labels(&self) -> BTreeSet<&L> {
        self.edges.iter().map(|e| &e.label).collect()
    }

    /// Label multiset as sorted `(label, count)` pairs.
    pub fn label_counts(&self) -> BTreeMap<&L, usize> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            *m.entry(&e.label).or_insert(0) += 1;
        }
        m
    }

    /// Vertices not attached to any edge.
    pub fn isolated_vertices(&self) -> Vec<&VertexId> {
        let attached: BTreeSet<&VertexId> = self.edges.iter().flat_map(|e| e.att.iter()).collect();
        self.vertices
            .iter()
            .filter(|v| !attached.contains(v))
            .collect()
    }

    /// `Inc_H(v)`: every `(edge, position)` attached to `v`, positions 1-based.
    pub fn incidences(&self, v: &VertexId) -> Vec<(&EdgeId, usize)> {
        self.edges
            .iter()
            .flat_map(|e| {
                e.att
                    .iter()
                    .enumerate()
                    .filter(move |(_, u)| *u == v)
                    .map(move |(j, _)| (&e.id, j + 1))
            })
            .collect()
    }

    /// Relabels every edge; the new label must keep the arity.
    pub fn map_labels<M: EdgeLabel>(&self, mut f: impl FnMut(&Edge<L>) -> M) -> Hypergraph<M> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let label = f(e);
                debug_assert_eq!(label.arity(), e.att.len());
                Edge {
                    id: e.id.clone(),
                    label,
                    att: e.att.clone(),
                }
            })
            .collect();
        Hypergraph::from_sorted_unchecked(self.vertices.clone(), edges)
    }

    /// Renames all ids; fails when the renaming is not injective.
    pub fn rename(
        &self,
        mut fv: impl FnMut(&VertexId) -> VertexId,
        mut fe: impl FnMut(&EdgeId) -> EdgeId,
    ) -> Result<Self, HypergraphError> {
        let map: BTreeMap<&VertexId, VertexId> = self.vertices.iter().map(|v| (v, fv(v))).collect();
        let edges: Vec<Edge<L>> = self
            .edges
            .iter()
            .map(|e| Edge {
                id: fe(&e.id),
                label: e.label.clone(),
                att: e.att.iter().map(|v| map[v].clone()).collect(),
            })
            .collect();
        Hypergraph::new(map.into_values(), edges)
    }
}

impl<L: EdgeLabel> fmt::Debug for Hypergraph<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph {{ V: {:?}, E: [", self.vertices)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}{:?}", e.id, e.label, e.att)?;
        }
        f.write_str("] }")
    }
}

/// Incremental construction; attachment vertices are added implicitly.
#[derive(Clone, Debug)]
pub struct HypergraphBuilder<L = Label> {
    vertices: BTreeSet<VertexId>,
    edges: Vec<Edge<L>>,
}

impl<L> Default for HypergraphBuilder<L> {
    fn default() -> Self {
        HypergraphBuilder {
            vertices: BTreeSet::new(),
            edges: Vec::new(),
        }
    }
}

impl<L: EdgeLabel> HypergraphBuilder<L> {
    pub fn vertex(mut self, v: impl Into<VertexId>) -> Self {
        self.vertices.insert(v.into());
        self
    }

    pub fn edge<V: Into<VertexId> + Clone>(
        mut self,
        id: impl Into<EdgeId>,
        label: L,
        att: &[V],
    ) -> Self {
        let att: Vec<VertexId> = att.iter().cloned().map(Into::into).collect();
        self.vertices.extend(att.iter().cloned());
        self.edges.push(Edge::new(id, label, att));
        self
    }

    pub fn build(self) -> Result<Hypergraph<L>, HypergraphError> {
        Hypergraph::new(self.vertices, self.edges)
    }
}
