//! Typed hypergraphs and their algebra: disjoint union, multiplication,
//! quotients, subtraction, label removal, components and isomorphism.

mod graph;
mod ids;
mod iso;
mod label;
mod ops;
mod partition;

pub use graph::{Edge, EdgeLabel, Hypergraph, HypergraphBuilder, HypergraphError};
pub use ids::{EdgeId, VertexId};
pub use iso::{
    edge_bijection_isomorphic, find_isomorphism, is_isomorphic, IsoClasses, Isomorphism,
};
pub use label::{AlphabetError, AlphabetIssue, AlphabetIssueKind, Label, LabelAlphabet, LabelKind};
pub use ops::{
    component_assignment, connected_components, disjoint_union, is_connected, merge_disjoint,
    multiply, quotient, remove_labels, remove_labels_where, subtract, sum, Multiplicity,
};
pub use partition::VertexPartition;
