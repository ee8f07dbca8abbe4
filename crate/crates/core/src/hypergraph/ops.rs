use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use super::graph::{Edge, EdgeLabel, Hypergraph, HypergraphError};
use super::ids::{EdgeId, VertexId};
use super::partition::VertexPartition;

/// `H1 + H2`; ids of summand `i` are prefixed with `i.`.
pub fn disjoint_union<L: EdgeLabel>(h1: &Hypergraph<L>, h2: &Hypergraph<L>) -> Hypergraph<L> {
    sum([h1, h2])
}

/// `H_0 + H_1 + ...`; ids of summand `i` are prefixed with `i.`.
pub fn sum<'a, L: EdgeLabel + 'a>(
    parts: impl IntoIterator<Item = &'a Hypergraph<L>>,
) -> Hypergraph<L> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (t, h) in parts.into_iter().enumerate() {
        vertices.extend(h.vertices().iter().map(|v| v.tagged(t)));
        edges.extend(h.edges().iter().map(|e| Edge {
            id: e.id.tagged(t),
            label: e.label.clone(),
            att: e.att.iter().map(|v| v.tagged(t)).collect(),
        }));
    }
    Hypergraph::new(vertices, edges).expect("tagged summands are disjoint")
}

/// Union of hypergraphs whose ids are already pairwise disjoint; ids are kept.
pub fn merge_disjoint<'a, L: EdgeLabel + 'a>(
    parts: impl IntoIterator<Item = &'a Hypergraph<L>>,
) -> Result<Hypergraph<L>, HypergraphError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for h in parts {
        vertices.extend(h.vertices().iter().cloned());
        edges.extend(h.edges().iter().cloned());
    }
    Hypergraph::new(vertices, edges)
}

/// Component index of every vertex and every edge, plus the component count.
///
/// Components are numbered by their least vertex; vertexless components (made
/// of 0-ary edges) come last in edge order.
pub fn component_assignment<L: EdgeLabel>(h: &Hypergraph<L>) -> (Vec<usize>, Vec<usize>, usize) {
    let n = h.vertex_count();
    let mut uf = UnionFind::<usize>::new(n);
    let att_idx: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| {
            e.att
                .iter()
                .map(|v| h.vertex_index(v).expect("valid"))
                .collect()
        })
        .collect();
    for att in &att_idx {
        for w in att.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut root_comp: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vertex_comp = Vec::with_capacity(n);
    for i in 0..n {
        let next = root_comp.len();
        vertex_comp.push(*root_comp.entry(uf.find(i)).or_insert(next));
    }
    let mut count = root_comp.len();
    let edge_comp = att_idx
        .iter()
        .map(|att| match att.first() {
            Some(&v) => vertex_comp[v],
            None => {
                count += 1;
                count - 1
            }
        })
        .collect();
    (vertex_comp, edge_comp, count)
}

/// `𝒞(H)`: the connected components, ordered as in [`component_assignment`].
pub fn connected_components<L: EdgeLabel>(h: &Hypergraph<L>) -> Vec<Hypergraph<L>> {
    let (vc, ec, count) = component_assignment(h);
    let mut vs: Vec<Vec<VertexId>> = vec![Vec::new(); count];
    let mut es: Vec<Vec<Edge<L>>> = vec![Vec::new(); count];
    for (v, &c) in h.vertices().iter().zip(&vc) {
        vs[c].push(v.clone());
    }
    for (e, &c) in h.edges().iter().zip(&ec) {
        es[c].push(e.clone());
    }
    vs.into_iter()
        .zip(es)
        .map(|(v, e)| Hypergraph::from_sorted_unchecked(v, e))
        .collect()
}

pub fn is_connected<L: EdgeLabel>(h: &Hypergraph<L>) -> bool {
    component_assignment(h).2 == 1
}

/// `m: 𝒞(H) → ℕ`, indexed like [`connected_components`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multiplicity {
    counts: Vec<usize>,
}

impl Multiplicity {
    pub fn new(counts: Vec<usize>) -> Self {
        Multiplicity { counts }
    }

    pub fn ones(components: usize) -> Self {
        Multiplicity::new(vec![1; components])
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// `m·H`: component `C` replaced by `m(C)` copies. Copies are summands in
/// component-major order and are tagged like [`sum`].
pub fn multiply<L: EdgeLabel>(
    h: &Hypergraph<L>,
    m: &Multiplicity,
) -> Result<Hypergraph<L>, HypergraphError> {
    let comps = connected_components(h);
    if comps.len() != m.counts.len() {
        return Err(HypergraphError::MultiplicityDomain {
            expected: comps.len(),
            found: m.counts.len(),
        });
    }
    let copies = comps
        .iter()
        .zip(&m.counts)
        .flat_map(|(c, &k)| std::iter::repeat_n(c, k));
    Ok(sum(copies))
}

/// `H/≡`: vertices become class representatives.
pub fn quotient<L: EdgeLabel>(
    h: &Hypergraph<L>,
    p: &VertexPartition,
) -> Result<Hypergraph<L>, HypergraphError> {
    let rep = |v: &VertexId| {
        p.representative(v)
            .cloned()
            .ok_or_else(|| HypergraphError::UnknownVertex(v.clone()))
    };
    let mut vertices = BTreeSet::new();
    for v in h.vertices() {
        vertices.insert(rep(v)?);
    }
    let edges = h
        .edges()
        .iter()
        .map(|e| {
            Ok(Edge {
                id: e.id.clone(),
                label: e.label.clone(),
                att: e.att.iter().map(rep).collect::<Result<_, _>>()?,
            })
        })
        .collect::<Result<Vec<_>, HypergraphError>>()?;
    Ok(Hypergraph::from_sorted_unchecked(
        vertices.into_iter().collect(),
        edges,
    ))
}

/// `H − (V, E)`.
pub fn subtract<L: EdgeLabel>(
    h: &Hypergraph<L>,
    vs: &BTreeSet<VertexId>,
    es: &BTreeSet<EdgeId>,
) -> Result<Hypergraph<L>, HypergraphError> {
    if let Some(v) = vs.iter().find(|v| !h.has_vertex(v)) {
        return Err(HypergraphError::UnknownVertex(v.clone()));
    }
    if let Some(e) = es.iter().find(|e| h.edge(e).is_none()) {
        return Err(HypergraphError::UnknownEdge(e.clone()));
    }
    let edges: Vec<Edge<L>> = h
        .edges()
        .iter()
        .filter(|e| !es.contains(&e.id))
        .cloned()
        .collect();
    for e in &edges {
        if let Some(v) = e.att.iter().find(|v| vs.contains(v)) {
            return Err(HypergraphError::DanglingAttachment {
                vertex: v.clone(),
                edge: e.id.clone(),
            });
        }
    }
    let vertices = h
        .vertices()
        .iter()
        .filter(|v| !vs.contains(v))
        .cloned()
        .collect();
    Ok(Hypergraph::from_sorted_unchecked(vertices, edges))
}

/// `rem_R(H)`: drops every edge labelled in `r`; vertices stay.
pub fn remove_labels<L: EdgeLabel>(h: &Hypergraph<L>, r: &BTreeSet<L>) -> Hypergraph<L> {
    remove_labels_where(h, |l| r.contains(l))
}

pub fn remove_labels_where<L: EdgeLabel>(
    h: &Hypergraph<L>,
    mut pred: impl FnMut(&L) -> bool,
) -> Hypergraph<L> {
    let edges = h
        .edges()
        .iter()
        .filter(|e| !pred(&e.label))
        .cloned()
        .collect();
    Hypergraph::from_sorted_unchecked(h.vertices().to_vec(), edges)
}
