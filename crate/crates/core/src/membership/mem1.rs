use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::colour::{ColouredLabel, Mem1Instance};
use super::system::{build_membership_system, Column, MembershipSystem};
use super::MembershipError;
use crate::diophantine::{solve_nonneg_with, DiophantineError, LinearSystem, SolverLimits};
use crate::fusion::{DerivationTrace, FusionError, FusionPairSet};
use crate::hypergraph::{
    component_assignment, is_isomorphic, EdgeId, Hypergraph, HypergraphError, LabelKind,
    Multiplicity,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mem1Options {
    /// Merge columns with equal `β`.
    pub dedup_columns: bool,
    /// Skip labelings that can only produce sign-definite coordinates.
    pub prune_colourings: bool,
    /// Components that may only serve as the base, exactly once.
    pub base_only: BTreeSet<usize>,
    pub solver: SolverLimits,
    /// Cap on enumerated coloured components.
    pub max_labelings: usize,
}

impl Default for Mem1Options {
    fn default() -> Self {
        Mem1Options {
            dedup_columns: true,
            prune_colourings: true,
            base_only: BTreeSet::new(),
            solver: SolverLimits::default(),
            max_labelings: 2_000_000,
        }
    }
}

/// A solution of `Σ k(C)·β(C) = −β(B)`.
#[derive(Clone, Debug)]
pub struct Mem1Certificate {
    pub base: Column,
    /// Columns with `k > 0`.
    pub counts: Vec<(Column, u64)>,
}

#[derive(Clone, Debug)]
pub struct Mem1Answer {
    pub member: bool,
    pub certificate: Option<Mem1Certificate>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("coloured label `{0}` has unmatched occurrences")]
    Unbalanced(String),
    #[error("the component of the base edge is not isomorphic to the target")]
    WrongComponent,
}

impl Mem1Certificate {
    /// Rebuilds `Z ⇒ m·Z ⇒ fr(P)` with `P` pairing complementary non-white
    /// labels, and checks that the base edge's component is `≅ H0`.
    pub fn replay(&self, inst: &Mem1Instance) -> Result<DerivationTrace, ReplayError> {
        let comps = inst.grammar().components();
        let mut m = vec![0usize; comps.len()];
        m[self.base.component] += 1;
        for (c, k) in &self.counts {
            m[c.component] += usize::try_from(*k).expect("copy count fits in memory");
        }
        let mut offset = vec![0usize; comps.len()];
        for i in 1..comps.len() {
            offset[i] = offset[i - 1] + m[i - 1];
        }
        let mut next = offset.clone();
        let mut copies: Vec<(usize, &Column)> = Vec::new();
        copies.push((next[self.base.component], &self.base));
        next[self.base.component] += 1;
        for (c, k) in &self.counts {
            for _ in 0..*k {
                copies.push((next[c.component], c));
                next[c.component] += 1;
            }
        }

        let alphabet = inst.grammar().alphabet();
        let mut sides: BTreeMap<ColouredLabel, (Vec<EdgeId>, Vec<EdgeId>)> = BTreeMap::new();
        let mut base_edge = None;
        for (t, col) in copies {
            for e in col.labeling(inst).edges() {
                let id = e.id.tagged(t);
                let ColouredLabel::Coloured { sigma, f, tau } = &e.label else {
                    base_edge = Some(id);
                    continue;
                };
                if e.label.is_white() {
                    continue;
                }
                let (pos, neg) = match sigma.kind() {
                    LabelKind::Complement => {
                        (alphabet.complement_of(sigma).expect("partner"), true)
                    }
                    _ => (sigma, false),
                };
                let key = ColouredLabel::Coloured {
                    sigma: pos.clone(),
                    f: f.clone(),
                    tau: tau.clone(),
                };
                let entry = sides.entry(key).or_default();
                if neg {
                    entry.1.push(id);
                } else {
                    entry.0.push(id);
                }
            }
        }
        let mut pairs = Vec::new();
        for (key, (pos, neg)) in sides {
            if pos.len() != neg.len() {
                return Err(ReplayError::Unbalanced(key.to_string()));
            }
            pairs.extend(pos.into_iter().zip(neg));
        }
        let base_edge = base_edge.expect("base copy has its a0 edge");
        let trace = DerivationTrace::new(inst.grammar().start().clone())
            .multiply(Multiplicity::new(m))?
            .fuse(FusionPairSet::new(pairs))?;
        let result = trace.result();
        let (vc, ec, _) = component_assignment(result);
        let k = ec[result.edge_index(&base_edge).expect("base edge survives")];
        let vertices = result
            .vertices()
            .iter()
            .zip(&vc)
            .filter(|(_, &c)| c == k)
            .map(|(v, _)| v.clone());
        let edges: Vec<_> = result
            .edges()
            .iter()
            .zip(&ec)
            .filter(|(_, &c)| c == k)
            .map(|(e, _)| e.clone())
            .collect();
        let component = Hypergraph::new(vertices, edges)?;
        if !is_isomorphic(&component, inst.target()) {
            return Err(ReplayError::WrongComponent);
        }
        Ok(trace)
    }
}

pub fn decide_mem1(inst: &Mem1Instance) -> Result<Mem1Answer, MembershipError> {
    decide_mem1_with(inst, &Mem1Options::default())
}

/// Tries base columns in order and stops at the first solvable system. A
/// solver cap on some base is reported only when no other base succeeds.
pub fn decide_mem1_with(
    inst: &Mem1Instance,
    opts: &Mem1Options,
) -> Result<Mem1Answer, MembershipError> {
    let sys = build_membership_system(inst, opts)?;
    solve_system(&sys, opts.solver)
}

pub(crate) fn solve_system(
    sys: &MembershipSystem,
    limits: SolverLimits,
) -> Result<Mem1Answer, MembershipError> {
    let columns: Vec<Vec<i64>> = sys.columns().iter().map(|c| sys.dense(c)).collect();
    let mut capped = None;
    for base in sys.bases() {
        let rhs: Vec<i64> = sys.dense(base).into_iter().map(|x| -x).collect();
        let ls = LinearSystem::from_columns(columns.clone(), rhs)?;
        match solve_nonneg_with(&ls, limits) {
            Ok(Some(k)) => {
                let counts = sys
                    .columns()
                    .iter()
                    .zip(k)
                    .filter(|(_, k)| *k > 0)
                    .map(|(c, k)| (c.clone(), k))
                    .collect();
                return Ok(Mem1Answer {
                    member: true,
                    certificate: Some(Mem1Certificate {
                        base: base.clone(),
                        counts,
                    }),
                });
            }
            Ok(None) => {}
            Err(DiophantineError::ResourceLimit { nodes }) => capped = Some(nodes),
            Err(e) => return Err(e.into()),
        }
    }
    match capped {
        Some(nodes) => Err(MembershipError::SolverLimit { nodes }),
        None => Ok(Mem1Answer {
            member: false,
            certificate: None,
        }),
    }
}
