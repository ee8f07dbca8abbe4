use std::collections::{BTreeSet, HashMap};

use super::colour::Mem1Instance;
use super::mem1::{decide_mem1_with, Mem1Answer, Mem1Options};
use super::MembershipError;
use crate::fusion::FusionGrammar;
use crate::hypergraph::{
    is_connected, merge_disjoint, sum, Edge, EdgeId, Hypergraph, Label, LabelAlphabet, LabelKind,
    VertexId,
};

/// `FG1 = (Z + I, F ⊎ T, {a0})` with target `H0`.
#[derive(Clone, Debug)]
pub struct Mem2Reduction {
    pub grammar: FusionGrammar,
    pub target: Hypergraph,
    pub i_graph: Hypergraph,
    /// `(π1(p), π2(p))` for `p = 1..N`; positions 1-based.
    pub positions: Vec<(EdgeId, usize)>,
    /// Index of `I` among the components of `FG1`.
    pub i_component: usize,
    pub a0: Label,
}

impl Mem2Reduction {
    pub fn instance(&self) -> Mem1Instance {
        Mem1Instance::new(self.grammar.clone(), self.target.clone())
            .expect("reduction target is a valid instance")
    }

    /// `opts` with `I` restricted to the base.
    pub fn options(&self, opts: &Mem1Options) -> Mem1Options {
        let mut o = opts.clone();
        o.base_only.insert(self.i_component);
        o
    }
}

fn fresh(taken: &mut BTreeSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

pub fn build_mem2_reduction(
    g: &FusionGrammar,
    h1: &Hypergraph,
) -> Result<Mem2Reduction, MembershipError> {
    g.require_markerless()?;
    if h1.edge_count() == 0 || !is_connected(h1) {
        return Err(MembershipError::InvalidTarget(
            "expected a connected hypergraph with at least one edge".into(),
        ));
    }
    for e in h1.edges() {
        if e.label.kind() != LabelKind::Terminal || !g.alphabet().contains(&e.label) {
            return Err(MembershipError::InvalidTarget(format!(
                "edge `{}` does not carry a terminal label of the grammar",
                e.id
            )));
        }
    }

    let mut taken: BTreeSet<String> = g
        .alphabet()
        .labels()
        .map(|l| l.name().to_string())
        .collect();
    let mut lifted: HashMap<Label, (Label, Label)> = HashMap::new();
    let mut labels: Vec<Label> = g
        .alphabet()
        .labels()
        .filter(|l| l.kind().is_fusion_like())
        .cloned()
        .collect();
    for t in g.alphabet().terminals() {
        let bar = fresh(&mut taken, &format!("{}_bar", t.name()));
        let pair = Label::fusion_pair(t.name(), &bar, t.arity());
        labels.push(pair.0.clone());
        labels.push(pair.1.clone());
        lifted.insert(t.clone(), pair);
    }
    let big_n: usize = h1.edges().iter().map(|e| e.att.len()).sum();
    let a0 = Label::terminal(fresh(&mut taken, "a0"), big_n);
    labels.push(a0.clone());
    let alphabet = LabelAlphabet::new(labels).expect("fresh names keep the alphabet valid");

    let z = g.start().map_labels(|e| match lifted.get(&e.label) {
        Some((pos, _)) => pos.clone(),
        None => e.label.clone(),
    });

    let mut prefix = String::from("I");
    let clash = |p: &str| {
        z.vertices().iter().any(|v| v.as_str().starts_with(p))
            || z.edges().iter().any(|e| e.id.as_str().starts_with(p))
    };
    while clash(&prefix) {
        prefix.push('\'');
    }
    let mut i_vertices = Vec::new();
    let mut i_edges = Vec::new();
    let mut positions = Vec::new();
    let mut a0_att = Vec::new();
    let mut h0_att = Vec::new();
    for (i, e) in h1.edges().iter().enumerate() {
        let mut att = Vec::new();
        for (j, v) in e.att.iter().enumerate() {
            let iv = VertexId::new(format!("{prefix}({},{})", i + 1, j + 1));
            i_vertices.push(iv.clone());
            att.push(iv.clone());
            a0_att.push(iv);
            h0_att.push(v.clone());
            positions.push((e.id.clone(), j + 1));
        }
        let bar = lifted[&e.label].1.clone();
        i_edges.push(Edge::new(format!("{prefix}.{}", e.id), bar, att));
    }
    let a0_id = EdgeId::new(format!("{prefix}#a0"));
    i_edges.push(Edge::new(a0_id.clone(), a0.clone(), a0_att));
    let i_graph = Hypergraph::new(i_vertices, i_edges).expect("fresh ids");
    let start = merge_disjoint([&z, &i_graph]).expect("prefix avoids start ids");
    let grammar = FusionGrammar::markerless(alphabet, start)?;
    let i_component = grammar.component_of_edge(&a0_id).expect("I is a component");

    let used: BTreeSet<VertexId> = h0_att.iter().cloned().collect();
    let target =
        Hypergraph::new(used, [Edge::new("e0", a0.clone(), h0_att)]).expect("attachment within H1");
    Ok(Mem2Reduction {
        grammar,
        target,
        i_graph,
        positions,
        i_component,
        a0,
    })
}

/// `FG^o`: `Z` plus, for every component and every vertex of it, a copy with
/// a fresh unary `o`-edge on that vertex; the target is a single `o`-edge.
pub fn build_mem_o_instance(g: &FusionGrammar) -> Result<Mem1Instance, MembershipError> {
    g.require_markerless()?;
    let o = Label::terminal(g.alphabet().fresh_name("o"), 1);
    let alphabet = g.alphabet().extended([o.clone()]).expect("fresh name");
    let mut copies: Vec<&Hypergraph> = g.components().iter().collect();
    let plain = copies.len();
    let mut roots: Vec<&VertexId> = Vec::new();
    for c in g.components() {
        for v in c.vertices() {
            copies.push(c);
            roots.push(v);
        }
    }
    let base = sum(copies);
    let mut edges = base.edges().to_vec();
    for (t, v) in (plain..).zip(roots) {
        edges.push(Edge::new(format!("{t}#o"), o.clone(), [v.tagged(t)]));
    }
    let start = Hypergraph::new(base.vertices().to_vec(), edges).expect("fresh edge ids");
    let grammar = FusionGrammar::markerless(alphabet, start)?;
    let target = Hypergraph::new(
        [VertexId::new("v")],
        [Edge::new("o", o, [VertexId::new("v")])],
    )
    .expect("valid");
    Mem1Instance::new(grammar, target)
}

pub fn decide_mem_o(g: &FusionGrammar) -> Result<bool, MembershipError> {
    Ok(decide_mem1_with(&build_mem_o_instance(g)?, &Mem1Options::default())?.member)
}

/// How `decide_mem` settled its answer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MemRoute {
    Empty,
    Disconnected,
    ForeignLabel,
    MemO,
    Mem2,
}

#[derive(Clone, Debug)]
pub struct MemAnswer {
    pub member: bool,
    pub route: MemRoute,
    /// The MEM-1 instance decided, with its answer.
    pub mem1: Option<(Mem1Instance, Mem1Answer)>,
}

pub fn decide_mem(g: &FusionGrammar, h: &Hypergraph) -> Result<bool, MembershipError> {
    Ok(decide_mem_with(g, h, &Mem1Options::default())?.member)
}

pub fn decide_mem_with(
    g: &FusionGrammar,
    h: &Hypergraph,
    opts: &Mem1Options,
) -> Result<MemAnswer, MembershipError> {
    g.require_markerless()?;
    if let Some(e) = h
        .edges()
        .iter()
        .find(|e| e.label.kind() != LabelKind::Terminal)
    {
        return Err(MembershipError::InvalidTarget(format!(
            "edge `{}` has non-terminal label `{}`",
            e.id, e.label
        )));
    }
    let settled = |member, route| MemAnswer {
        member,
        route,
        mem1: None,
    };
    if h.vertex_count() == 0 && h.edge_count() == 0 {
        return Ok(settled(false, MemRoute::Empty));
    }
    if !is_connected(h) {
        return Ok(settled(false, MemRoute::Disconnected));
    }
    if h.edge_count() == 0 {
        let inst = build_mem_o_instance(g)?;
        let ans = decide_mem1_with(&inst, opts)?;
        return Ok(MemAnswer {
            member: ans.member,
            route: MemRoute::MemO,
            mem1: Some((inst, ans)),
        });
    }
    if h.edges().iter().any(|e| !g.alphabet().contains(&e.label)) {
        return Ok(settled(false, MemRoute::ForeignLabel));
    }
    let red = build_mem2_reduction(g, h)?;
    let inst = red.instance();
    let ans = decide_mem1_with(&inst, &red.options(opts))?;
    Ok(MemAnswer {
        member: ans.member,
        route: MemRoute::Mem2,
        mem1: Some((inst, ans)),
    })
}
