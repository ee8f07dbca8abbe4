use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::mem1::Mem1Options;
use super::mem2::decide_mem_with;
use super::MembershipError;
use crate::fusion::{strip, Engine, FusionGrammar, SearchBounds};
use crate::hypergraph::{
    is_connected, is_isomorphic, Edge, Hypergraph, IsoClasses, Label, LabelKind, VertexId,
};

/// `z ↦ c0 + c1·z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Affine {
    pub c0: u64,
    pub c1: u64,
}

impl Affine {
    pub const fn new(c0: u64, c1: u64) -> Self {
        Affine { c0, c1 }
    }

    pub const fn constant(c: u64) -> Self {
        Affine::new(c, 0)
    }

    pub const fn identity() -> Self {
        Affine::new(0, 1)
    }

    pub fn eval(&self, z: u64) -> u64 {
        self.c0.saturating_add(self.c1.saturating_mul(z))
    }
}

/// A grammar whose members may carry at most `f_M(|X|)` markers and
/// `f_K(|X|)` connectors.
#[derive(Clone, Debug)]
pub struct BoundedFusionGrammar {
    pub grammar: FusionGrammar,
    pub f_m: Affine,
    pub f_k: Affine,
}

impl BoundedFusionGrammar {
    pub fn new(grammar: FusionGrammar, f_m: Affine, f_k: Affine) -> Self {
        BoundedFusionGrammar { grammar, f_m, f_k }
    }
}

#[derive(Clone, Debug)]
pub struct BoundedOptions {
    /// Derivation search tried before candidate enumeration.
    pub oracle: Option<SearchBounds>,
    pub enumerate: bool,
    pub max_candidates: usize,
    pub mem: Mem1Options,
}

impl Default for BoundedOptions {
    fn default() -> Self {
        BoundedOptions {
            oracle: Some(SearchBounds::new(3, 3)),
            enumerate: true,
            max_candidates: 100_000,
            mem: Mem1Options::default(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundedRoute {
    NoMarkersAllowed,
    ForeignLabel,
    Oracle,
    Enumeration,
}

#[derive(Clone, Debug)]
pub struct BoundedAnswer {
    pub member: bool,
    pub route: BoundedRoute,
    /// `Y` with `rem_{M∪K}(Y) ≅ x`.
    pub witness: Option<Hypergraph>,
}

pub fn decide_mem_bounded(
    bg: &BoundedFusionGrammar,
    x: &Hypergraph,
) -> Result<bool, MembershipError> {
    Ok(decide_mem_bounded_with(bg, x, &BoundedOptions::default())?.member)
}

/// `rem_{M∪K}` only removes edges, so every candidate `Y` is `x` plus
/// marker/connector edges on `V_x`.
pub fn decide_mem_bounded_with(
    bg: &BoundedFusionGrammar,
    x: &Hypergraph,
    opts: &BoundedOptions,
) -> Result<BoundedAnswer, MembershipError> {
    if let Some(e) = x
        .edges()
        .iter()
        .find(|e| e.label.kind() != LabelKind::Terminal)
    {
        return Err(MembershipError::InvalidTarget(format!(
            "edge `{}` has non-terminal label `{}`",
            e.id, e.label
        )));
    }
    let size = x.size() as u64;
    let (fm, fk) = (bg.f_m.eval(size), bg.f_k.eval(size));
    let answer = |member, route, witness| BoundedAnswer {
        member,
        route,
        witness,
    };
    if fm == 0 {
        return Ok(answer(false, BoundedRoute::NoMarkersAllowed, None));
    }
    let g = &bg.grammar;
    if x.edges().iter().any(|e| !g.alphabet().contains(&e.label)) {
        return Ok(answer(false, BoundedRoute::ForeignLabel, None));
    }
    let is_marker = |l: &Label| l.kind() == LabelKind::Marker;
    let is_connector = |l: &Label| l.kind() == LabelKind::Connector;

    if let Some(bounds) = opts.oracle {
        let mut hit = None;
        let _ = Engine::new(g).explore(bounds, &mut |s| {
            for y in s.members() {
                let (m, k) = (
                    y.count_where(is_marker) as u64,
                    y.count_where(is_connector) as u64,
                );
                if (1..=fm).contains(&m) && k <= fk && is_isomorphic(&strip(g, &y), x) {
                    hit = Some(y);
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(y) = hit {
            return Ok(answer(true, BoundedRoute::Oracle, Some(y)));
        }
    }
    if !opts.enumerate {
        return Err(MembershipError::CandidateLimit { candidates: 0 });
    }

    let items = |pred: &dyn Fn(&Label) -> bool| -> Vec<(Label, Vec<VertexId>)> {
        let mut out = Vec::new();
        for l in g.alphabet().labels().filter(|l| pred(l)) {
            for att in tuples(x.vertices(), l.arity()) {
                out.push((l.clone(), att));
            }
        }
        out
    };
    let m_items = items(&is_marker);
    let k_items = items(&is_connector);
    let view = g.terminal_view();
    let to_terminal = |l: &Label| l.with_kind(LabelKind::Terminal, None);
    let mut seen: IsoClasses<Label> = IsoClasses::new();
    let mut candidates = 0usize;
    let mut capped = None;
    let cap = |f: u64| usize::try_from(f).unwrap_or(usize::MAX);
    'sizes: for nm in 1..=cap(fm) {
        if m_items.is_empty() {
            break;
        }
        for nk in 0..=cap(fk) {
            if nk > 0 && k_items.is_empty() {
                break;
            }
            let mut mset = vec![0; nm];
            loop {
                let mut kset = vec![0; nk];
                loop {
                    candidates += 1;
                    if candidates > opts.max_candidates {
                        capped = Some(MembershipError::CandidateLimit {
                            candidates: candidates - 1,
                        });
                        break 'sizes;
                    }
                    let mut edges = x.edges().to_vec();
                    let extra = mset
                        .iter()
                        .map(|&i| &m_items[i])
                        .chain(kset.iter().map(|&i| &k_items[i]));
                    for (n, (l, att)) in extra.enumerate() {
                        edges.push(Edge::new(format!("#y{n}"), l.clone(), att.iter().cloned()));
                    }
                    let y = Hypergraph::new(x.vertices().to_vec(), edges).expect("fresh edge ids");
                    if is_connected(&y) && seen.insert(y.clone()).1 {
                        let yt = y.map_labels(|e| match e.label.kind() {
                            LabelKind::Marker | LabelKind::Connector => to_terminal(&e.label),
                            _ => e.label.clone(),
                        });
                        match decide_mem_with(&view, &yt, &opts.mem) {
                            Ok(a) if a.member => {
                                return Ok(answer(true, BoundedRoute::Enumeration, Some(y)))
                            }
                            Ok(_) => {}
                            Err(e) if e.is_resource_limit() => capped = Some(e),
                            Err(e) => return Err(e),
                        }
                    }
                    if !next_multiset(&mut kset, k_items.len()) {
                        break;
                    }
                }
                if !next_multiset(&mut mset, m_items.len()) {
                    break;
                }
            }
        }
    }
    match capped {
        Some(e) => Err(e),
        None => Ok(answer(false, BoundedRoute::Enumeration, None)),
    }
}

fn tuples(vs: &[VertexId], k: usize) -> Vec<Vec<VertexId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                vs.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Advances a nondecreasing sequence over `0..n`; false after the last one.
fn next_multiset(seq: &mut [usize], n: usize) -> bool {
    for i in (0..seq.len()).rev() {
        if seq[i] + 1 < n {
            let v = seq[i] + 1;
            for x in &mut seq[i..] {
                *x = v;
            }
            return true;
        }
    }
    false
}
