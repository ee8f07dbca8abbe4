use thiserror::Error;

use super::rule::{apply_parallel_fusion, FusionError, FusionPairSet};
use crate::hypergraph::{multiply, Hypergraph, HypergraphError, Multiplicity};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DerivationStep {
    Multiply {
        multiplicity: Multiplicity,
        result: Hypergraph,
    },
    Fuse {
        pairs: FusionPairSet,
        result: Hypergraph,
    },
}

impl DerivationStep {
    pub fn result(&self) -> &Hypergraph {
        match self {
            DerivationStep::Multiply { result, .. } | DerivationStep::Fuse { result, .. } => result,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TraceError {
    #[error("step {step} does not reproduce its recorded result")]
    Mismatch { step: usize },
    #[error("step {step}: {source}")]
    Fusion { step: usize, source: FusionError },
    #[error("step {step}: {source}")]
    Hypergraph {
        step: usize,
        source: HypergraphError,
    },
}

/// A derivation `Z ⇒ H_1 ⇒ … ⇒ H_k` with every intermediate hypergraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationTrace {
    pub start: Hypergraph,
    pub steps: Vec<DerivationStep>,
}

impl DerivationTrace {
    pub fn new(start: Hypergraph) -> Self {
        DerivationTrace {
            start,
            steps: Vec::new(),
        }
    }

    /// The last hypergraph of the derivation.
    pub fn result(&self) -> &Hypergraph {
        self.steps
            .last()
            .map_or(&self.start, DerivationStep::result)
    }

    pub fn multiply(mut self, multiplicity: Multiplicity) -> Result<Self, HypergraphError> {
        let result = multiply(self.result(), &multiplicity)?;
        self.steps.push(DerivationStep::Multiply {
            multiplicity,
            result,
        });
        Ok(self)
    }

    pub fn fuse(mut self, pairs: FusionPairSet) -> Result<Self, FusionError> {
        let result = apply_parallel_fusion(self.result(), &pairs)?;
        self.steps.push(DerivationStep::Fuse { pairs, result });
        Ok(self)
    }

    /// Recomputes every step from the start and compares with the record.
    pub fn replay(&self) -> Result<(), TraceError> {
        let mut cur = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let next = match step {
                DerivationStep::Multiply { multiplicity, .. } => multiply(&cur, multiplicity)
                    .map_err(|source| TraceError::Hypergraph { step: i, source })?,
                DerivationStep::Fuse { pairs, .. } => apply_parallel_fusion(&cur, pairs)
                    .map_err(|source| TraceError::Fusion { step: i, source })?,
            };
            if &next != step.result() {
                return Err(TraceError::Mismatch { step: i });
            }
            cur = next;
        }
        Ok(())
    }
}
