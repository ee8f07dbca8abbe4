//! Non-emptiness via a reduction to single-edge membership: squeeze every
//! terminal, marker and connector edge to a point, designate one squeezed
//! marker as the unary `a0`, and drop everything that is not a fusion edge.

use thiserror::Error;

use crate::fusion::{Flavor, FusionGrammar, GrammarError};
use crate::hypergraph::{
    quotient, remove_labels_where, sum, Edge, EdgeId, Hypergraph, HypergraphError, Label,
    LabelAlphabet, LabelKind, VertexId, VertexPartition,
};
use crate::membership::{decide_mem1_with, Mem1Answer, Mem1Instance, Mem1Options, MembershipError};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum NonemptyError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Membership(#[from] MembershipError),
}

impl NonemptyError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, NonemptyError::Membership(e) if e.is_resource_limit())
    }
}

/// Terminal, marker and connector labels.
fn squeezable(l: &Label) -> bool {
    !l.kind().is_fusion_like()
}

/// `H/≡` for the least `≡` joining all attachments of each squeezable edge.
pub fn squeeze(h: &Hypergraph) -> Hypergraph {
    let pairs = h
        .edges()
        .iter()
        .filter(|e| squeezable(&e.label))
        .flat_map(|e| e.att.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    let p = VertexPartition::from_pairs(h.vertices().to_vec(), pairs)
        .expect("attachments are vertices");
    quotient(h, &p).expect("partition covers all vertices")
}

/// `e` relabelled `a0` and made unary when it is a marker whose attachments
/// all coincide; the empty hypergraph otherwise.
pub fn designate(h: &Hypergraph, e: &EdgeId, a0: &Label) -> Result<Hypergraph, HypergraphError> {
    let edge = h
        .edge(e)
        .ok_or_else(|| HypergraphError::UnknownEdge(e.clone()))?;
    let v0 = match edge.att.split_first() {
        Some((v0, rest))
            if edge.label.kind() == LabelKind::Marker && rest.iter().all(|v| v == v0) =>
        {
            v0.clone()
        }
        _ => return Ok(Hypergraph::empty()),
    };
    let edges = h.edges().iter().map(|x| {
        if &x.id == e {
            Edge::new(x.id.clone(), a0.clone(), [v0.clone()])
        } else {
            x.clone()
        }
    });
    Hypergraph::new(h.vertices().to_vec(), edges)
}

/// `Dsg(H) = H + Σ_e dsg(H, e)`; empty summands vanish. Summand `0` is `H`,
/// the rest follow edge order.
pub fn designated_sum(h: &Hypergraph, a0: &Label) -> Hypergraph {
    sum(designated_summands(h, a0).iter().map(|(_, g)| g))
}

fn designated_summands(h: &Hypergraph, a0: &Label) -> Vec<(Option<EdgeId>, Hypergraph)> {
    let mut out = vec![(None, h.clone())];
    for e in h.edges() {
        let d = designate(h, &e.id, a0).expect("edge of h");
        if d.vertex_count() > 0 {
            out.push((Some(e.id.clone()), d));
        }
    }
    out
}

/// Where a component of `Ξ` came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XiOrigin {
    /// Index into the components of the (lifted) input grammar.
    pub component: usize,
    /// The designated marker edge of `sqz(C)`.
    pub designated: Option<EdgeId>,
}

/// `FĜ = (Ξ, F, {a0})` with target `H0`, a single `a0`-edge on one vertex.
#[derive(Clone, Debug)]
pub struct NeReduction {
    /// The input grammar, lifted with markers when it had none.
    pub source: FusionGrammar,
    pub grammar: FusionGrammar,
    pub target: Hypergraph,
    pub a0: Label,
    /// Per component of `grammar`.
    pub origins: Vec<XiOrigin>,
}

impl NeReduction {
    pub fn instance(&self) -> Mem1Instance {
        Mem1Instance::new(self.grammar.clone(), self.target.clone()).expect("H0 is a valid target")
    }
}

/// Markerless grammars are first given a unary marker on every vertex. The
/// removal step keeps `a0`, although it is terminal.
pub fn build_ne_reduction(g: &FusionGrammar) -> Result<NeReduction, NonemptyError> {
    let source = match g.flavor() {
        Flavor::Markerless => g.lift_with_markers("mu").0,
        Flavor::Full => g.clone(),
    };
    let a0 = Label::terminal(source.alphabet().fresh_name("a0"), 1);
    let mut summands = Vec::new();
    let mut tags = Vec::new();
    for (ci, c) in source.components().iter().enumerate() {
        for (designated, d) in designated_summands(&squeeze(c), &a0) {
            summands.push(remove_labels_where(&d, |l| squeezable(l) && *l != a0));
            tags.push(XiOrigin {
                component: ci,
                designated,
            });
        }
    }
    let xi = sum(&summands);
    let mut labels: Vec<Label> = source
        .alphabet()
        .labels()
        .filter(|l| l.kind().is_fusion_like())
        .cloned()
        .collect();
    labels.push(a0.clone());
    let grammar =
        FusionGrammar::markerless(LabelAlphabet::new(labels).map_err(GrammarError::from)?, xi)?;
    let origins = grammar
        .components()
        .iter()
        .map(|c| {
            let v = c.vertices().first().expect("summands have vertices");
            let t: usize = v
                .as_str()
                .split_once('.')
                .and_then(|(t, _)| t.parse().ok())
                .expect("tagged id");
            tags[t].clone()
        })
        .collect();
    let v = VertexId::new("v0");
    let target = Hypergraph::new([v.clone()], [Edge::new("e0", a0.clone(), [v])])?;
    Ok(NeReduction {
        source,
        grammar,
        target,
        a0,
        origins,
    })
}

#[derive(Clone, Debug)]
pub struct NeAnswer {
    pub nonempty: bool,
    pub reduction: NeReduction,
    pub mem1: Mem1Answer,
}

pub fn decide_nonempty(g: &FusionGrammar) -> Result<bool, NonemptyError> {
    Ok(decide_nonempty_with(g, &Mem1Options::default())?.nonempty)
}

pub fn decide_nonempty_with(
    g: &FusionGrammar,
    opts: &Mem1Options,
) -> Result<NeAnswer, NonemptyError> {
    let reduction = build_ne_reduction(g)?;
    let mem1 = decide_mem1_with(&reduction.instance(), opts)?;
    Ok(NeAnswer {
        nonempty: mem1.member,
        reduction,
        mem1,
    })
}
