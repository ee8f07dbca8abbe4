//! Decision procedures for fusion grammars over typed hypergraphs.
//!
//! The crate covers membership (with and without marker bounds), non-emptiness,
//! Parikh-vector queries for connection-preserving grammars, an exact
//! nonnegative Diophantine solver, and a bounded derivation oracle used to
//! cross-check the deciders.

pub mod diophantine;
pub mod fixtures;
pub mod fusion;
pub mod hypergraph;
pub mod io;
pub mod membership;
pub mod nonempty;
pub mod parikh;

pub use hypergraph::{
    Edge, EdgeId, EdgeLabel, Hypergraph, Label, LabelAlphabet, LabelKind, VertexId, VertexPartition,
};
