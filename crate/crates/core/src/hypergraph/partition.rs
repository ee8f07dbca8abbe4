use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use super::graph::HypergraphError;
use super::ids::VertexId;

/// An equivalence relation on a vertex set.
///
/// Each class is represented by its least member in id order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexPartition {
    vertices: Vec<VertexId>,
    repr: Vec<usize>,
}

impl VertexPartition {
    pub fn identity(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort();
        vertices.dedup();
        let repr = (0..vertices.len()).collect();
        VertexPartition { vertices, repr }
    }

    /// The least equivalence containing `pairs`.
    pub fn from_pairs(
        vertices: impl IntoIterator<Item = VertexId>,
        pairs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, HypergraphError> {
        let base = VertexPartition::identity(vertices);
        let mut idx_pairs = Vec::new();
        for (a, b) in pairs {
            idx_pairs.push((base.index_of(&a)?, base.index_of(&b)?));
        }
        Ok(base.with_index_pairs(idx_pairs))
    }

    pub fn from_classes(
        classes: impl IntoIterator<Item = Vec<VertexId>>,
    ) -> Result<Self, HypergraphError> {
        let classes: Vec<Vec<VertexId>> = classes.into_iter().collect();
        let all: Vec<VertexId> = classes.iter().flatten().cloned().collect();
        let n = all.len();
        let base = VertexPartition::identity(all);
        if base.vertices.len() != n {
            let mut seen = std::collections::BTreeSet::new();
            let dup = classes.iter().flatten().find(|v| !seen.insert(*v)).cloned();
            return Err(HypergraphError::DuplicateVertex(
                dup.expect("duplicate exists"),
            ));
        }
        let pairs = classes
            .iter()
            .flat_map(|c| c.windows(2).map(|w| (w[0].clone(), w[1].clone())))
            .collect::<Vec<_>>();
        VertexPartition::from_pairs(base.vertices, pairs)
    }

    fn index_of(&self, v: &VertexId) -> Result<usize, HypergraphError> {
        self.vertices
            .binary_search(v)
            .map_err(|_| HypergraphError::UnknownVertex(v.clone()))
    }

    fn with_index_pairs(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let n = self.vertices.len();
        let mut uf = UnionFind::<usize>::new(n);
        for (i, &r) in self.repr.iter().enumerate() {
            uf.union(i, r);
        }
        for (a, b) in pairs {
            uf.union(a, b);
        }
        let mut least: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            least.entry(uf.find(i)).or_insert(i);
        }
        let repr = (0..n).map(|i| least[&uf.find(i)]).collect();
        VertexPartition {
            vertices: self.vertices.clone(),
            repr,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn representative(&self, v: &VertexId) -> Option<&VertexId> {
        let i = self.vertices.binary_search(v).ok()?;
        Some(&self.vertices[self.repr[i]])
    }

    pub fn same_class(&self, a: &VertexId, b: &VertexId) -> bool {
        match (self.representative(a), self.representative(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Classes sorted by representative; members sorted.
    pub fn classes(&self) -> Vec<Vec<VertexId>> {
        let mut by_repr: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (i, &r) in self.repr.iter().enumerate() {
            by_repr.entry(r).or_default().push(self.vertices[i].clone());
        }
        by_repr.into_values().collect()
    }

    pub fn class_count(&self) -> usize {
        self.repr
            .iter()
            .enumerate()
            .filter(|(i, r)| i == *r)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.repr.iter().enumerate().all(|(i, &r)| i == r)
    }

    /// The least equivalence containing both relations, on this vertex set.
    /// Each class of `other` is restricted to this vertex set first.
    pub fn join(&self, other: &VertexPartition) -> Self {
        let mut pairs = Vec::new();
        for class in other.classes() {
            let members: Vec<usize> = class
                .iter()
                .filter_map(|v| self.vertices.binary_search(v).ok())
                .collect();
            pairs.extend(members.windows(2).map(|w| (w[0], w[1])));
        }
        self.with_index_pairs(pairs)
    }
}
