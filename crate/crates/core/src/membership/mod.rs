//! Membership deciders: the colouring construction for single-edge targets,
//! the reduction of arbitrary connected targets to it, the isolated-vertex
//! case, and grammars with a bounded number of markers and connectors.

mod bounded;
mod colour;
mod mem1;
mod mem2;
mod system;

use thiserror::Error;

use crate::diophantine::DiophantineError;
use crate::fusion::GrammarError;
use crate::hypergraph::VertexId;

pub use bounded::{
    decide_mem_bounded, decide_mem_bounded_with, Affine, BoundedAnswer, BoundedFusionGrammar,
    BoundedOptions, BoundedRoute,
};
pub use colour::{
    base_candidates, base_hyperedge_colourings, base_vertex_colourings, connection_pairs,
    hyperedge_colourings, vertex_colourings, BaseCandidate, Colour, ColourPalette, ColouredLabel,
    Colouring, ConnectionPair, Mem1Instance, TauTriple,
};
pub use mem1::{
    decide_mem1, decide_mem1_with, Mem1Answer, Mem1Certificate, Mem1Options, ReplayError,
};
pub use mem2::{
    build_mem2_reduction, build_mem_o_instance, decide_mem, decide_mem_o, decide_mem_with,
    Mem2Reduction, MemAnswer, MemRoute,
};
pub use system::{beta, build_membership_system, BetaKey, Column, MembershipSystem};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum MembershipError {
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("the colouring does not fix the base edge's attachment to the target's")]
    NotBaseColouring,
    #[error("vertex `{0}` has no colour")]
    IncompleteColouring(VertexId),
    #[error("coloured label `{0}` is not a coordinate of the system")]
    UnindexedLabel(String),
    #[error("resource limit: enumeration stopped after {labelings} coloured components")]
    ResourceLimit { labelings: usize },
    #[error("resource limit: the solver stopped after {nodes} nodes")]
    SolverLimit { nodes: usize },
    #[error("resource limit: enumeration stopped after {candidates} candidates")]
    CandidateLimit { candidates: usize },
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
}

impl MembershipError {
    /// The answer is unknown because a configured cap was reached.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            MembershipError::ResourceLimit { .. }
                | MembershipError::SolverLimit { .. }
                | MembershipError::CandidateLimit { .. }
                | MembershipError::Diophantine(DiophantineError::ResourceLimit { .. })
        )
    }
}
