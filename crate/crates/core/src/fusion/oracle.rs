use std::collections::BTreeMap;
use std::ops::ControlFlow;

use petgraph::unionfind::UnionFind;

use super::grammar::{Flavor, FusionGrammar, SearchBounds};
use super::rule::FusionPairSet;
use super::trace::DerivationTrace;
use crate::hypergraph::{
    is_isomorphic, remove_labels_where, Edge, EdgeId, Hypergraph, IsoClasses, Label, LabelKind,
    Multiplicity, VertexId,
};

/// The pair `(p, n)`, the vertex classes of `D` and its remaining edges.
type Disconnection = ((usize, usize), Vec<usize>, Vec<usize>);

/// Result of a bounded membership query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleOutcome {
    Found {
        witness: DerivationTrace,
        /// The component of the derived hypergraph, before marker removal.
        component: Hypergraph,
    },
    NotFoundWithinBounds,
}

impl OracleOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, OracleOutcome::Found { .. })
    }
}

/// A fusion step whose result part `D` is disconnected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionViolation {
    /// `Z ⇒ m·Z ⇒ fr(P) H ⇒ fr({p}) H'`.
    pub trace: DerivationTrace,
    pub pair: (EdgeId, EdgeId),
    /// The disconnected `D`.
    pub disconnected: Hypergraph,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConnectionCheck {
    Violation(Box<ConnectionViolation>),
    NoViolationWithinBounds,
}

struct IEdge {
    label: usize,
    att: Vec<usize>,
}

struct IComp {
    vertices: usize,
    edges: Vec<IEdge>,
}

/// Index-based view of a grammar's components.
pub(crate) struct Engine<'g> {
    grammar: &'g FusionGrammar,
    labels: Vec<Label>,
    complement: Vec<Option<usize>>,
    comps: Vec<IComp>,
}

/// One edge of `m·Z`.
struct FlatEdge {
    label: usize,
    att: Vec<usize>,
    copy: usize,
    /// Position within its component.
    local: usize,
}

struct Flat {
    /// Per copy: component index, first global vertex.
    copies: Vec<(usize, usize)>,
    vertex_copy: Vec<(usize, usize)>,
    edges: Vec<FlatEdge>,
}

/// `m·Z ⇒ fr(P) H` for one `(m, P)`, with the component structure of `H`.
pub(crate) struct State<'e> {
    engine: &'e Engine<'e>,
    multiplicity: &'e [usize],
    flat: &'e Flat,
    pairs: &'e [(usize, usize)],
    fused: Vec<bool>,
    /// Class representative (global vertex) per global vertex.
    class: Vec<usize>,
    /// Post-fusion component per global vertex.
    comp: Vec<usize>,
    comp_count: usize,
}

impl<'g> Engine<'g> {
    pub(crate) fn new(grammar: &'g FusionGrammar) -> Self {
        let mut ids: BTreeMap<Label, usize> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut comps = Vec::new();
        for c in grammar.components() {
            let vix: BTreeMap<&VertexId, usize> = c
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (v, i))
                .collect();
            let edges = c
                .edges()
                .iter()
                .map(|e| {
                    let label = *ids.entry(e.label.clone()).or_insert_with(|| {
                        labels.push(e.label.clone());
                        labels.len() - 1
                    });
                    IEdge {
                        label,
                        att: e.att.iter().map(|v| vix[v]).collect(),
                    }
                })
                .collect();
            comps.push(IComp {
                vertices: c.vertex_count(),
                edges,
            });
        }
        let complement = labels
            .iter()
            .map(|l| labels.iter().position(|o| l.is_complement_of(o)))
            .collect();
        Engine {
            grammar,
            labels,
            complement,
            comps,
        }
    }

    fn flatten(&self, m: &[usize]) -> Flat {
        let mut copies = Vec::new();
        let mut vertex_copy = Vec::new();
        let mut edges = Vec::new();
        let mut next = 0;
        for (ci, &count) in m.iter().enumerate() {
            let comp = &self.comps[ci];
            for _ in 0..count {
                let copy = copies.len();
                copies.push((ci, next));
                vertex_copy.extend((0..comp.vertices).map(|v| (copy, v)));
                for (local, e) in comp.edges.iter().enumerate() {
                    edges.push(FlatEdge {
                        label: e.label,
                        att: e.att.iter().map(|v| v + next).collect(),
                        copy,
                        local,
                    });
                }
                next += comp.vertices;
            }
        }
        Flat {
            copies,
            vertex_copy,
            edges,
        }
    }

    /// Every multiplicity with total at most `bound`, plus `1⃗`, by ascending total.
    fn multiplicities(&self, bound: usize) -> Vec<Vec<usize>> {
        let k = self.comps.len();
        let mut out = Vec::new();
        if k == 0 {
            return vec![Vec::new()];
        }
        for total in 0..=bound {
            let mut cur = vec![0; k];
            compositions(&mut cur, 0, total, &mut out);
        }
        let ones = vec![1; k];
        if !out.contains(&ones) {
            out.push(ones);
        }
        out
    }

    /// Visits every `(m, P)` within `bounds`, up to symmetry of identical
    /// untouched copies.
    pub(crate) fn explore(
        &self,
        bounds: SearchBounds,
        visit: &mut dyn FnMut(&State) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for m in self.multiplicities(bounds.max_total_copies) {
            let flat = self.flatten(&m);
            let positives: Vec<usize> = (0..flat.edges.len())
                .filter(|&i| self.labels[flat.edges[i].label].kind() == LabelKind::Fusion)
                .collect();
            let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, e) in flat.edges.iter().enumerate() {
                if self.labels[e.label].kind() == LabelKind::Complement {
                    by_label.entry(e.label).or_default().push(i);
                }
            }
            let mut walk = PairWalk {
                engine: self,
                m: &m,
                flat: &flat,
                positives: &positives,
                by_label: &by_label,
                used: vec![false; flat.edges.len()],
                touched: vec![false; flat.copies.len()],
                pairs: Vec::new(),
                limit: bounds.max_fusion_pairs,
            };
            walk.rec(0, visit)?;
        }
        ControlFlow::Continue(())
    }
}

fn compositions(cur: &mut Vec<usize>, i: usize, left: usize, out: &mut Vec<Vec<usize>>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for x in (0..=left).rev() {
        cur[i] = x;
        compositions(cur, i + 1, left - x, out);
    }
}

struct PairWalk<'a> {
    engine: &'a Engine<'a>,
    m: &'a [usize],
    flat: &'a Flat,
    positives: &'a [usize],
    by_label: &'a BTreeMap<usize, Vec<usize>>,
    used: Vec<bool>,
    touched: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    limit: usize,
}

impl PairWalk<'_> {
    /// A copy is symmetric-redundant if an earlier copy of the same
    /// component is also untouched.
    fn redundant(&self, copy: usize) -> bool {
        if self.touched[copy] {
            return false;
        }
        let comp = self.flat.copies[copy].0;
        (0..copy).any(|c| self.flat.copies[c].0 == comp && !self.touched[c])
    }

    fn rec(
        &mut self,
        i: usize,
        visit: &mut dyn FnMut(&State) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == self.positives.len() {
            let state = State::new(self.engine, self.m, self.flat, &self.pairs);
            return visit(&state);
        }
        let p = self.positives[i];
        let pc = self.flat.edges[p].copy;
        let was = self.touched[pc];
        self.touched[pc] = true;
        self.rec(i + 1, visit)?;
        if self.pairs.len() < self.limit {
            let comp_label = self.engine.complement[self.flat.edges[p].label];
            let candidates = comp_label.and_then(|l| self.by_label.get(&l));
            for &n in candidates.into_iter().flatten() {
                let nc = self.flat.edges[n].copy;
                if self.used[n] || self.redundant(nc) {
                    continue;
                }
                let prev = self.touched[nc];
                self.used[n] = true;
                self.touched[nc] = true;
                self.pairs.push((p, n));
                let r = self.rec(i + 1, visit);
                self.pairs.pop();
                self.touched[nc] = prev;
                self.used[n] = false;
                r?;
            }
        }
        self.touched[pc] = was;
        ControlFlow::Continue(())
    }
}

impl<'e> State<'e> {
    fn new(
        engine: &'e Engine<'e>,
        multiplicity: &'e [usize],
        flat: &'e Flat,
        pairs: &'e [(usize, usize)],
    ) -> Self {
        let n = flat.vertex_copy.len();
        let mut fused = vec![false; flat.edges.len()];
        let mut uf = UnionFind::<usize>::new(n);
        for &(a, b) in pairs {
            fused[a] = true;
            fused[b] = true;
            for (x, y) in flat.edges[a].att.iter().zip(&flat.edges[b].att) {
                uf.union(*x, *y);
            }
        }
        let class: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
        let mut cuf = UnionFind::<usize>::new(n);
        for (i, e) in flat.edges.iter().enumerate() {
            if fused[i] {
                continue;
            }
            for w in e.att.windows(2) {
                cuf.union(class[w[0]], class[w[1]]);
            }
        }
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comp = vec![0; n];
        for v in 0..n {
            let r = cuf.find(class[v]);
            let next = ids.len();
            comp[v] = *ids.entry(r).or_insert(next);
        }
        State {
            engine,
            multiplicity,
            flat,
            pairs,
            fused,
            class,
            comp,
            comp_count: ids.len(),
        }
    }

    fn label(&self, e: usize) -> &Label {
        &self.engine.labels[self.flat.edges[e].label]
    }

    fn edge_comp(&self, e: usize) -> Option<usize> {
        self.flat.edges[e].att.first().map(|&v| self.comp[v])
    }

    /// Edges of `H` (unfused) per post-fusion component. Arity-0 edges are
    /// components of their own, numbered after the vertex components.
    fn components_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.comp_count];
        for e in 0..self.flat.edges.len() {
            if self.fused[e] {
                continue;
            }
            match self.edge_comp(e) {
                Some(c) => out[c].push(e),
                None => out.push(vec![e]),
            }
        }
        out
    }

    /// Whether the component with these edges is a language member before
    /// stripping `M ∪ K`.
    fn qualifies(&self, edges: &[usize]) -> bool {
        match self.engine.grammar.flavor() {
            Flavor::Markerless => edges
                .iter()
                .all(|&e| self.label(e).kind() == LabelKind::Terminal),
            Flavor::Full => {
                edges.iter().all(|&e| self.label(e).kind().is_final())
                    && edges
                        .iter()
                        .any(|&e| self.label(e).kind() == LabelKind::Marker)
            }
        }
    }

    fn vertex_id(&self, v: usize) -> VertexId {
        let (copy, local) = self.flat.vertex_copy[v];
        let comp = self.flat.copies[copy].0;
        self.engine.grammar.components()[comp].vertices()[local].tagged(copy)
    }

    fn edge_id(&self, e: usize) -> EdgeId {
        let fe = &self.flat.edges[e];
        let comp = self.flat.copies[fe.copy].0;
        self.engine.grammar.components()[comp].edges()[fe.local]
            .id
            .tagged(fe.copy)
    }

    /// Least member id per class, as `quotient` names it.
    fn class_names(&self) -> BTreeMap<usize, VertexId> {
        let mut names: BTreeMap<usize, VertexId> = BTreeMap::new();
        for v in 0..self.class.len() {
            let id = self.vertex_id(v);
            names
                .entry(self.class[v])
                .and_modify(|cur| {
                    if id < *cur {
                        *cur = id.clone();
                    }
                })
                .or_insert(id);
        }
        names
    }

    /// Builds the component holding `edges` (and vertex component `c`, if
    /// any) with the ids `fr(P)` would give it in `m·Z`.
    fn materialize(
        &self,
        c: Option<usize>,
        edges: &[usize],
        names: &BTreeMap<usize, VertexId>,
    ) -> Hypergraph {
        let mut vertices: Vec<VertexId> = match c {
            Some(c) => names
                .iter()
                .filter(|(&r, _)| self.comp[r] == c)
                .map(|(_, id)| id.clone())
                .collect(),
            None => Vec::new(),
        };
        vertices.sort();
        let es: Vec<Edge> = edges
            .iter()
            .map(|&e| {
                Edge::new(
                    self.edge_id(e),
                    self.label(e).clone(),
                    self.flat.edges[e]
                        .att
                        .iter()
                        .map(|&v| names[&self.class[v]].clone()),
                )
            })
            .collect();
        Hypergraph::new(vertices, es).expect("component of a valid fusion result")
    }

    /// Every qualifying component of `H`, materialized.
    pub(crate) fn members(&self) -> Vec<Hypergraph> {
        let per = self.components_edges();
        let mut names = None;
        let mut out = Vec::new();
        for (c, edges) in per.iter().enumerate() {
            if !self.qualifies(edges) {
                continue;
            }
            let names = names.get_or_insert_with(|| self.class_names());
            let vc = (c < self.comp_count).then_some(c);
            out.push(self.materialize(vc, edges, names));
        }
        out
    }

    pub(crate) fn pair_set(&self) -> FusionPairSet {
        FusionPairSet::new(
            self.pairs
                .iter()
                .map(|&(a, b)| (self.edge_id(a), self.edge_id(b))),
        )
    }

    /// `Z ⇒ m·Z ⇒ fr(P) H`.
    pub(crate) fn trace(&self) -> DerivationTrace {
        DerivationTrace::new(self.engine.grammar.start().clone())
            .multiply(Multiplicity::new(self.multiplicity.to_vec()))
            .expect("multiplicity matches the components")
            .fuse(self.pair_set())
            .expect("enumerated pairs are valid")
    }

    /// Unfused complementary pairs of `H` whose single fusion yields a
    /// disconnected `D`; returns the first with its `D`.
    fn disconnecting_pair(&self) -> Option<Disconnection> {
        let edges = &self.flat.edges;
        for p in 0..edges.len() {
            if self.fused[p] || self.label(p).kind() != LabelKind::Fusion {
                continue;
            }
            for n in 0..edges.len() {
                if self.fused[n] || !self.label(p).is_complement_of(self.label(n)) {
                    continue;
                }
                let (cp, cn) = (self.edge_comp(p), self.edge_comp(n));
                let involved: Vec<usize> = match (cp, cn) {
                    (Some(a), Some(b)) if a == b => vec![a],
                    (Some(a), Some(b)) => vec![a, b],
                    _ => continue,
                };
                let verts: Vec<usize> = (0..self.class.len())
                    .filter(|&v| self.class[v] == v && involved.contains(&self.comp[v]))
                    .collect();
                let rest: Vec<usize> = (0..edges.len())
                    .filter(|&e| !self.fused[e] && e != p && e != n)
                    .filter(|&e| self.edge_comp(e).is_some_and(|c| involved.contains(&c)))
                    .collect();
                let mut uf = UnionFind::<usize>::new(self.class.len());
                for (x, y) in edges[p].att.iter().zip(&edges[n].att) {
                    uf.union(self.class[*x], self.class[*y]);
                }
                for &e in &rest {
                    for w in edges[e].att.windows(2) {
                        uf.union(self.class[w[0]], self.class[w[1]]);
                    }
                }
                let connected = verts.iter().all(|&v| uf.equiv(v, verts[0]));
                if !connected {
                    return Some(((p, n), verts, rest));
                }
            }
        }
        None
    }
}

/// All language members derivable within `bounds`, one per isomorphism class.
pub fn oracle_search(g: &FusionGrammar, bounds: SearchBounds) -> Vec<Hypergraph> {
    let engine = Engine::new(g);
    let mut found = IsoClasses::new();
    let _ = engine.explore(bounds, &mut |s| {
        for c in s.members() {
            found.insert(strip(g, &c));
        }
        ControlFlow::Continue(())
    });
    found.into_representatives()
}

/// `rem_{M∪K}` for full grammars; identity otherwise.
pub(crate) fn strip(g: &FusionGrammar, h: &Hypergraph) -> Hypergraph {
    match g.flavor() {
        Flavor::Markerless => h.clone(),
        Flavor::Full => remove_labels_where(h, |l| {
            matches!(l.kind(), LabelKind::Marker | LabelKind::Connector)
        }),
    }
}

/// Bounded semi-decision of `h ∈ L(g)`.
pub fn oracle_membership(g: &FusionGrammar, h: &Hypergraph, bounds: SearchBounds) -> OracleOutcome {
    let engine = Engine::new(g);
    let target = h.label_counts();
    let mut hit = None;
    let _ = engine.explore(bounds, &mut |s| {
        for c in s.members() {
            let y = strip(g, &c);
            if y.vertex_count() == h.vertex_count()
                && y.label_counts() == target
                && is_isomorphic(&y, h)
            {
                hit = Some(OracleOutcome::Found {
                    witness: s.trace(),
                    component: c,
                });
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    hit.unwrap_or(OracleOutcome::NotFoundWithinBounds)
}

/// Bounded search for a fusion step `H ⇒ H'` after `Z ⇒ m·Z ⇒ fr(P) H`
/// whose `D` is disconnected. Only `P` with fewer than `max_fusion_pairs`
/// pairs are extended.
pub fn check_connection_preserving(g: &FusionGrammar, bounds: SearchBounds) -> ConnectionCheck {
    let engine = Engine::new(g);
    let inner = SearchBounds::new(
        bounds.max_total_copies,
        bounds.max_fusion_pairs.saturating_sub(1),
    );
    let mut hit = None;
    let _ = engine.explore(inner, &mut |s| {
        let Some(((p, n), verts, rest)) = s.disconnecting_pair() else {
            return ControlFlow::Continue(());
        };
        let (ep, en) = (s.edge_id(p), s.edge_id(n));
        let trace = s.trace();
        let before = trace.result().clone();
        let trace = trace
            .fuse(FusionPairSet::new([(ep.clone(), en.clone())]))
            .expect("complementary unfused pair");
        let names = s.class_names();
        let pre_vertices: Vec<VertexId> = verts.iter().map(|v| names[v].clone()).collect();
        let pre_edges: Vec<EdgeId> = rest.iter().map(|&e| s.edge_id(e)).collect();
        let disconnected = disconnected_part(&before, &pre_vertices, &pre_edges, &ep, &en);
        hit = Some(ConnectionCheck::Violation(Box::new(ConnectionViolation {
            trace,
            pair: (ep, en),
            disconnected,
        })));
        ControlFlow::Break(())
    });
    hit.unwrap_or(ConnectionCheck::NoViolationWithinBounds)
}

/// `D`: the fusion of `{e, ē}` restricted to the components hosting it.
fn disconnected_part(
    h: &Hypergraph,
    vertices: &[VertexId],
    rest: &[EdgeId],
    e: &EdgeId,
    ebar: &EdgeId,
) -> Hypergraph {
    let mut edges: Vec<Edge> = rest
        .iter()
        .map(|id| h.edge(id).expect("edge of H").clone())
        .collect();
    edges.push(h.edge(e).expect("edge of H").clone());
    edges.push(h.edge(ebar).expect("edge of H").clone());
    let part = Hypergraph::new(vertices.to_vec(), edges).expect("sub-hypergraph of H");
    super::rule::apply_fusion(&part, e, ebar).expect("complementary pair")
}
