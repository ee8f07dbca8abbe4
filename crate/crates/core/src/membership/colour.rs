use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::MembershipError;
use crate::fusion::FusionGrammar;
use crate::hypergraph::{Edge, EdgeId, EdgeLabel, Hypergraph, Label, LabelKind, VertexId};

/// A single-edge target `H0` over a markerless grammar.
#[derive(Clone, Debug)]
pub struct Mem1Instance {
    grammar: FusionGrammar,
    target: Hypergraph,
    palette: ColourPalette,
    /// `att_{H0}(e0)` as palette indices.
    target_att: Vec<usize>,
}

impl Mem1Instance {
    pub fn new(grammar: FusionGrammar, target: Hypergraph) -> Result<Self, MembershipError> {
        grammar.require_markerless()?;
        let [e0] = target.edges() else {
            return Err(MembershipError::InvalidTarget(format!(
                "expected exactly one edge, found {}",
                target.edge_count()
            )));
        };
        if e0.label.kind() != LabelKind::Terminal {
            return Err(MembershipError::InvalidTarget(format!(
                "edge `{}` has non-terminal label `{}`",
                e0.id, e0.label
            )));
        }
        if let Some(v) = target.isolated_vertices().first() {
            return Err(MembershipError::InvalidTarget(format!(
                "vertex `{v}` is isolated"
            )));
        }
        let palette = ColourPalette::of(&target);
        let target_att = e0
            .att
            .iter()
            .map(|v| target.vertex_index(v).expect("attached vertex"))
            .collect();
        Ok(Mem1Instance {
            grammar,
            target,
            palette,
            target_att,
        })
    }

    pub fn grammar(&self) -> &FusionGrammar {
        &self.grammar
    }

    pub fn target(&self) -> &Hypergraph {
        &self.target
    }

    pub fn target_edge(&self) -> &Edge {
        &self.target.edges()[0]
    }

    /// `a0`.
    pub fn label(&self) -> &Label {
        &self.target_edge().label
    }

    /// `n = |V_{H0}|`.
    pub fn n(&self) -> usize {
        self.target.vertex_count()
    }

    /// `N`, the arity of `a0`.
    pub fn big_n(&self) -> usize {
        self.target_att.len()
    }

    pub fn palette(&self) -> &ColourPalette {
        &self.palette
    }

    pub(crate) fn target_att(&self) -> &[usize] {
        &self.target_att
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Vertex(VertexId),
    White,
}

impl Colour {
    pub fn is_white(&self) -> bool {
        matches!(self, Colour::White)
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Vertex(v) => write!(f, "{v}"),
            Colour::White => f.write_str("w"),
        }
    }
}

/// The vertices of `H0` in id order, then white.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColourPalette {
    colours: Vec<Colour>,
}

impl ColourPalette {
    pub fn of<L: EdgeLabel>(h0: &Hypergraph<L>) -> Self {
        let mut colours: Vec<Colour> = h0.vertices().iter().cloned().map(Colour::Vertex).collect();
        colours.push(Colour::White);
        ColourPalette { colours }
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn white(&self) -> usize {
        self.colours.len() - 1
    }

    pub fn index(&self, c: &Colour) -> Option<usize> {
        match c {
            Colour::White => Some(self.white()),
            Colour::Vertex(_) => self.colours[..self.white()].iter().position(|x| x == c),
        }
    }
}

/// A vertex colouring of one component; `base` is `e0′` for base colourings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Colouring {
    pub col: Vec<(VertexId, Colour)>,
    pub base: Option<EdgeId>,
}

impl Colouring {
    pub fn get(&self, v: &VertexId) -> Option<&Colour> {
        self.col
            .binary_search_by(|(u, _)| u.cmp(v))
            .ok()
            .map(|i| &self.col[i].1)
    }
}

/// `(i1, i2)` with `i1 < i2` and `att_{H0}(e0)(i1) = att_{H0}(e0)(i2)`;
/// positions are 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ConnectionPair {
    pub i1: usize,
    pub i2: usize,
    /// The shared vertex of `H0`.
    pub colour: VertexId,
}

/// `(i1, i2, j)`: position `j` conducts connection pair `(i1, i2)`. 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct TauTriple {
    pub i1: usize,
    pub i2: usize,
    pub j: usize,
}

impl fmt::Display for TauTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i1, self.i2, self.j)
    }
}

/// A label of `F^Col`, or the untouched `a0` of a base edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ColouredLabel {
    Coloured {
        sigma: Label,
        f: Vec<Colour>,
        tau: BTreeSet<TauTriple>,
    },
    Plain(Label),
}

impl ColouredLabel {
    pub fn is_white(&self) -> bool {
        match self {
            ColouredLabel::Coloured { f, tau, .. } => {
                tau.is_empty() && f.iter().all(Colour::is_white)
            }
            ColouredLabel::Plain(_) => false,
        }
    }

    pub fn sigma(&self) -> &Label {
        match self {
            ColouredLabel::Coloured { sigma, .. } | ColouredLabel::Plain(sigma) => sigma,
        }
    }
}

impl EdgeLabel for ColouredLabel {
    fn arity(&self) -> usize {
        self.sigma().arity()
    }
}

impl fmt::Display for ColouredLabel {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColouredLabel::Plain(l) => write!(fm, "{l}"),
            ColouredLabel::Coloured { sigma, f, tau } => {
                write!(fm, "({sigma},[")?;
                for (i, c) in f.iter().enumerate() {
                    if i > 0 {
                        fm.write_str(",")?;
                    }
                    write!(fm, "{c}")?;
                }
                fm.write_str("],{")?;
                for (i, t) in tau.iter().enumerate() {
                    if i > 0 {
                        fm.write_str(",")?;
                    }
                    write!(fm, "{t}")?;
                }
                fm.write_str("})")
            }
        }
    }
}

/// A component `C` with an `a0`-edge `e0′` whose coincidences are
/// coincidences in `H0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseCandidate {
    pub component: usize,
    pub graph: Hypergraph,
    pub edge: EdgeId,
    /// `att_{H0}(e0)`.
    pub target: Vec<VertexId>,
}

pub fn connection_pairs(inst: &Mem1Instance) -> Vec<ConnectionPair> {
    let att = &inst.target_edge().att;
    let mut out = Vec::new();
    for i1 in 0..att.len() {
        for i2 in i1 + 1..att.len() {
            if att[i1] == att[i2] {
                out.push(ConnectionPair {
                    i1: i1 + 1,
                    i2: i2 + 1,
                    colour: att[i1].clone(),
                });
            }
        }
    }
    out
}

/// Every map `V_c → palette`, odometer order with the last vertex fastest.
pub fn vertex_colourings<'a, L: EdgeLabel>(
    c: &'a Hypergraph<L>,
    pal: &'a ColourPalette,
) -> impl Iterator<Item = Colouring> + 'a {
    let n = c.vertex_count();
    let k = pal.len();
    let mut digits = vec![0usize; n];
    let mut done = k == 0 && n > 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let col = c
            .vertices()
            .iter()
            .zip(&digits)
            .map(|(v, &d)| (v.clone(), pal.colours()[d].clone()))
            .collect();
        done = true;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < k {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(Colouring { col, base: None })
    })
}

pub fn base_candidates(inst: &Mem1Instance) -> Vec<BaseCandidate> {
    let a0 = inst.label();
    let target = &inst.target_edge().att;
    let mut out = Vec::new();
    for (ci, c) in inst.grammar().components().iter().enumerate() {
        for e in c.edges() {
            if &e.label != a0 {
                continue;
            }
            let coincide_ok = (0..e.att.len()).all(|i| {
                (i + 1..e.att.len()).all(|j| e.att[i] != e.att[j] || target[i] == target[j])
            });
            if coincide_ok {
                out.push(BaseCandidate {
                    component: ci,
                    graph: c.clone(),
                    edge: e.id.clone(),
                    target: target.clone(),
                });
            }
        }
    }
    out
}

/// `VC^b`: colourings of `b.graph` agreeing with `att_{H0}(e0)` on `e0′`.
pub fn base_vertex_colourings(b: &BaseCandidate, pal: &ColourPalette) -> Vec<Colouring> {
    let e = b.graph.edge(&b.edge).expect("base edge");
    vertex_colourings(&b.graph, pal)
        .filter(|col| {
            e.att
                .iter()
                .zip(&b.target)
                .all(|(v, t)| col.get(v) == Some(&Colour::Vertex(t.clone())))
        })
        .map(|col| Colouring {
            base: Some(b.edge.clone()),
            ..col
        })
        .collect()
}

/// `EC(c, col)`.
pub fn hyperedge_colourings(
    c: &Hypergraph,
    col: &Colouring,
    pairs: &[ConnectionPair],
) -> Result<Vec<Hypergraph<ColouredLabel>>, MembershipError> {
    let (p, colours, pal) = prepare_public(c, col, pairs)?;
    let pairs = pair_infos(pairs, &pal);
    Ok(collect_labelings(c, &p, &colours, &pal, &pairs, None))
}

/// `EC^b(b, col)`: `e0′` keeps `a0`.
pub fn base_hyperedge_colourings(
    b: &BaseCandidate,
    col: &Colouring,
    pairs: &[ConnectionPair],
) -> Result<Vec<Hypergraph<ColouredLabel>>, MembershipError> {
    let (p, colours, pal) = prepare_public(&b.graph, col, pairs)?;
    let e = p.edge_index(&b.edge);
    let base_att = &p.edges[e].att;
    let ok = col.base.as_ref() == Some(&b.edge)
        && base_att
            .iter()
            .zip(&b.target)
            .all(|(&v, t)| pal.colours()[colours[v]] == Colour::Vertex(t.clone()));
    if !ok {
        return Err(MembershipError::NotBaseColouring);
    }
    let pairs = pair_infos(pairs, &pal);
    Ok(collect_labelings(
        &b.graph,
        &p,
        &colours,
        &pal,
        &pairs,
        Some(e),
    ))
}

/// Palette from the colours used by `col` and the pairs; white last.
fn prepare_public(
    c: &Hypergraph,
    col: &Colouring,
    pairs: &[ConnectionPair],
) -> Result<(Prepared, Vec<usize>, ColourPalette), MembershipError> {
    let mut vs: BTreeSet<VertexId> = pairs.iter().map(|p| p.colour.clone()).collect();
    for (_, c) in &col.col {
        if let Colour::Vertex(v) = c {
            vs.insert(v.clone());
        }
    }
    let mut colours: Vec<Colour> = vs.into_iter().map(Colour::Vertex).collect();
    colours.push(Colour::White);
    let pal = ColourPalette { colours };
    let p = Prepared::new(c);
    let idx = c
        .vertices()
        .iter()
        .map(|v| {
            col.get(v)
                .and_then(|x| pal.index(x))
                .ok_or_else(|| MembershipError::IncompleteColouring(v.clone()))
        })
        .collect::<Result<Vec<usize>, _>>()?;
    Ok((p, idx, pal))
}

fn pair_infos(pairs: &[ConnectionPair], pal: &ColourPalette) -> Vec<PairInfo> {
    pairs
        .iter()
        .map(|p| PairInfo {
            i1: p.i1,
            i2: p.i2,
            colour: pal
                .index(&Colour::Vertex(p.colour.clone()))
                .expect("pair colour in palette"),
        })
        .collect()
}

fn collect_labelings(
    c: &Hypergraph,
    p: &Prepared,
    colours: &[usize],
    pal: &ColourPalette,
    pairs: &[PairInfo],
    base: Option<usize>,
) -> Vec<Hypergraph<ColouredLabel>> {
    let mut out = Vec::new();
    let Some(slots) = tau_slots(p, colours, pairs, base) else {
        return out;
    };
    let _ = for_each_tau(p, &slots, &mut |tau| {
        out.push(materialize(c, colours, pal, tau, base));
        ControlFlow::<()>::Continue(())
    });
    out
}

pub(crate) fn materialize(
    c: &Hypergraph,
    colours: &[usize],
    pal: &ColourPalette,
    tau: &[Vec<TauTriple>],
    base: Option<usize>,
) -> Hypergraph<ColouredLabel> {
    let mut k = 0;
    c.map_labels(|e| {
        let i = k;
        k += 1;
        if Some(i) == base {
            return ColouredLabel::Plain(e.label.clone());
        }
        ColouredLabel::Coloured {
            sigma: e.label.clone(),
            f: e.att
                .iter()
                .map(|v| pal.colours()[colours[c.vertex_index(v).expect("vertex")]].clone())
                .collect(),
            tau: tau[i].iter().copied().collect(),
        }
    })
}

/// A component in index form.
pub(crate) struct Prepared {
    pub edges: Vec<PEdge>,
    /// `Inc(v)` as `(edge, 0-based position)`.
    pub inc: Vec<Vec<(usize, usize)>>,
}

pub(crate) struct PEdge {
    pub id: EdgeId,
    pub label: Label,
    pub att: Vec<usize>,
}

impl Prepared {
    pub fn new(c: &Hypergraph) -> Self {
        let mut inc = vec![Vec::new(); c.vertex_count()];
        let edges = c
            .edges()
            .iter()
            .enumerate()
            .map(|(ei, e)| {
                let att: Vec<usize> = e
                    .att
                    .iter()
                    .map(|v| c.vertex_index(v).expect("vertex"))
                    .collect();
                for (j, &v) in att.iter().enumerate() {
                    inc[v].push((ei, j));
                }
                PEdge {
                    id: e.id.clone(),
                    label: e.label.clone(),
                    att,
                }
            })
            .collect();
        Prepared { edges, inc }
    }

    pub fn vertex_count(&self) -> usize {
        self.inc.len()
    }

    pub fn edge_index(&self, id: &EdgeId) -> usize {
        self.edges
            .iter()
            .position(|e| &e.id == id)
            .expect("edge of component")
    }
}

/// A connection pair with its colour as a palette index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairInfo {
    pub i1: usize,
    pub i2: usize,
    pub colour: usize,
}

/// One independent choice: the conduction set of one vertex for one pair.
pub(crate) struct TauSlot {
    pair: PairInfo,
    options: Vec<Vec<(usize, usize)>>,
}

/// Per `(pair, vertex)` the admissible conduction sets, or `None` when some
/// vertex admits none. Slots whose only option is empty are dropped.
pub(crate) fn tau_slots(
    p: &Prepared,
    colours: &[usize],
    pairs: &[PairInfo],
    base: Option<usize>,
) -> Option<Vec<TauSlot>> {
    let mut slots = Vec::new();
    for &pair in pairs {
        for (v, &colour) in colours.iter().enumerate().take(p.vertex_count()) {
            if colour != pair.colour {
                continue;
            }
            let sizes: &[usize] = match base {
                Some(b) => {
                    let att = &p.edges[b].att;
                    match (att[pair.i1 - 1] == v, att[pair.i2 - 1] == v) {
                        (true, true) => &[0],
                        (true, false) | (false, true) => &[1],
                        (false, false) => &[0, 2],
                    }
                }
                None => &[0, 2],
            };
            let eligible: Vec<(usize, usize)> = p.inc[v]
                .iter()
                .copied()
                .filter(|&(e, _)| Some(e) != base)
                .collect();
            let mut options = Vec::new();
            for &k in sizes {
                subsets(&eligible, k, &mut options);
            }
            match options.as_slice() {
                [] => return None,
                [only] if only.is_empty() => {}
                _ => slots.push(TauSlot { pair, options }),
            }
        }
    }
    Some(slots)
}

fn subsets<T: Copy>(items: &[T], k: usize, out: &mut Vec<Vec<T>>) {
    fn go<T: Copy>(items: &[T], k: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::with_capacity(k), out);
}

/// Visits `τ` for every combination of slot options; `τ[e]` is unsorted.
pub(crate) fn for_each_tau<B>(
    p: &Prepared,
    slots: &[TauSlot],
    visit: &mut dyn FnMut(&[Vec<TauTriple>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for_each_tau_checked(p, slots, &|_, _| true, visit)
}

/// As `for_each_tau`, skipping every `τ` in which some edge fails `edge_ok`;
/// each edge is checked once no later slot can extend its `τ[e]`.
pub(crate) fn for_each_tau_checked<B>(
    p: &Prepared,
    slots: &[TauSlot],
    edge_ok: &dyn Fn(usize, &[TauTriple]) -> bool,
    visit: &mut dyn FnMut(&[Vec<TauTriple>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    struct Ctx<'a, B> {
        slots: &'a [TauSlot],
        closing: Vec<Vec<usize>>,
        edge_ok: &'a dyn Fn(usize, &[TauTriple]) -> bool,
        visit: &'a mut dyn FnMut(&[Vec<TauTriple>]) -> ControlFlow<B>,
    }
    fn go<B>(cx: &mut Ctx<'_, B>, k: usize, tau: &mut Vec<Vec<TauTriple>>) -> ControlFlow<B> {
        let Some(slot) = cx.slots.get(k) else {
            return (cx.visit)(tau);
        };
        for opt in &slot.options {
            for &(e, j) in opt {
                tau[e].push(TauTriple {
                    i1: slot.pair.i1,
                    i2: slot.pair.i2,
                    j: j + 1,
                });
            }
            let ok = cx.closing[k + 1].iter().all(|&e| (cx.edge_ok)(e, &tau[e]));
            let r = if ok {
                go(cx, k + 1, tau)
            } else {
                ControlFlow::Continue(())
            };
            for &(e, _) in opt {
                tau[e].pop();
            }
            r?;
        }
        ControlFlow::Continue(())
    }
    // closing[k]: edges final once slots 0..k are chosen.
    let mut last = vec![0usize; p.edges.len()];
    for (k, slot) in slots.iter().enumerate() {
        for opt in &slot.options {
            for &(e, _) in opt {
                last[e] = k + 1;
            }
        }
    }
    let mut closing = vec![Vec::new(); slots.len() + 1];
    for (e, &k) in last.iter().enumerate() {
        closing[k].push(e);
    }
    let mut tau = vec![Vec::new(); p.edges.len()];
    if !closing[0].iter().all(|&e| edge_ok(e, &tau[e])) {
        return ControlFlow::Continue(());
    }
    let mut cx = Ctx {
        slots,
        closing,
        edge_ok,
        visit,
    };
    go(&mut cx, 0, &mut tau)
}
