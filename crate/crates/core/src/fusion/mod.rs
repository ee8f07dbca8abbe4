//! Fusion rules, derivations and the bounded derivation oracle.

mod evidence;
mod grammar;
mod net;
mod oracle;
mod rule;
mod trace;

pub use evidence::{evidence_path, EvidenceHop, EvidencePath};
pub use grammar::{Flavor, FusionGrammar, GrammarError, SearchBounds};
pub use net::{fusion_net, FusionNet, NetEdge};
pub use oracle::{
    check_connection_preserving, oracle_membership, oracle_search, ConnectionCheck,
    ConnectionViolation, OracleOutcome,
};
pub(crate) use oracle::{strip, Engine};
pub use rule::{
    apply_fusion, apply_parallel_fusion, identification_classes, FusionError, FusionPairSet,
};
pub use trace::{DerivationStep, DerivationTrace, TraceError};
