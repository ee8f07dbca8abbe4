use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::ops::ControlFlow;

use super::colour::{
    base_candidates, connection_pairs, for_each_tau, for_each_tau_checked, materialize, tau_slots,
    Colour, ColourPalette, ColouredLabel, Mem1Instance, PairInfo, Prepared, TauTriple,
};
use super::mem1::Mem1Options;
use super::MembershipError;
use crate::hypergraph::{EdgeId, Hypergraph, Label, LabelAlphabet, LabelKind};

/// A `β` coordinate: a non-white coloured label whose `σ` is not a
/// complement. Its complement `(σ̄, f, τ)` counts negatively.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BetaKey {
    pub sigma: Label,
    pub f: Vec<Colour>,
    pub tau: Vec<TauTriple>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct RawKey {
    sigma: Label,
    f: Vec<usize>,
    tau: Vec<TauTriple>,
}

/// One coloured component, kept in index form.
#[derive(Clone, Debug)]
pub(crate) struct RawLabeling {
    pub component: usize,
    pub colours: Vec<usize>,
    pub tau: Vec<Vec<TauTriple>>,
    pub base: Option<usize>,
}

/// A column of `S` or `S^b`: the sparse `β` of one coloured component.
#[derive(Clone, Debug)]
pub struct Column {
    pub tag: String,
    pub component: usize,
    /// `(coordinate, value)`, coordinates increasing, values nonzero.
    pub beta: Vec<(usize, i64)>,
    pub(crate) witness: RawLabeling,
}

impl Column {
    /// The coloured component this column was computed from.
    pub fn labeling(&self, inst: &Mem1Instance) -> Hypergraph<ColouredLabel> {
        let w = &self.witness;
        materialize(
            &inst.grammar().components()[w.component],
            &w.colours,
            inst.palette(),
            &w.tau,
            w.base,
        )
    }

    /// The `a0`-edge of a base column.
    pub fn base_edge<'a>(&self, inst: &'a Mem1Instance) -> Option<&'a EdgeId> {
        let c = &inst.grammar().components()[self.witness.component];
        self.witness.base.map(|b| &c.edges()[b].id)
    }
}

/// The `β`-vectors of `S` and `S^b` over a shared coordinate index.
#[derive(Clone, Debug)]
pub struct MembershipSystem {
    alphabet: LabelAlphabet,
    palette: ColourPalette,
    keys: Vec<RawKey>,
    index: HashMap<RawKey, usize>,
    columns: Vec<Column>,
    bases: Vec<Column>,
}

impl MembershipSystem {
    /// Number of coordinates.
    pub fn d(&self) -> usize {
        self.keys.len()
    }

    pub fn key(&self, i: usize) -> BetaKey {
        let k = &self.keys[i];
        BetaKey {
            sigma: k.sigma.clone(),
            f: k.f
                .iter()
                .map(|&c| self.palette.colours()[c].clone())
                .collect(),
            tau: k.tau.clone(),
        }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn bases(&self) -> &[Column] {
        &self.bases
    }

    pub fn dense(&self, c: &Column) -> Vec<i64> {
        let mut v = vec![0; self.d()];
        for &(i, x) in &c.beta {
            v[i] = x;
        }
        v
    }

    /// `σ` made positive, with the sign it contributes.
    fn orient(&self, sigma: &Label) -> (Label, i64) {
        match sigma.kind() {
            LabelKind::Complement => (
                self.alphabet
                    .complement_of(sigma)
                    .expect("complement label has a partner")
                    .clone(),
                -1,
            ),
            _ => (sigma.clone(), 1),
        }
    }

    fn intern(&mut self, key: RawKey) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.keys.len();
        self.keys.push(key.clone());
        self.index.insert(key, i);
        i
    }

    fn beta_raw(
        &mut self,
        p: &Prepared,
        colours: &[usize],
        tau: &[Vec<TauTriple>],
        base: Option<usize>,
    ) -> Vec<(usize, i64)> {
        let white = self.palette.white();
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (ei, e) in p.edges.iter().enumerate() {
            if Some(ei) == base {
                continue;
            }
            let f: Vec<usize> = e.att.iter().map(|&v| colours[v]).collect();
            if tau[ei].is_empty() && f.iter().all(|&c| c == white) {
                continue;
            }
            let mut t = tau[ei].clone();
            t.sort_unstable();
            let (sigma, sign) = self.orient(&e.label);
            let i = self.intern(RawKey { sigma, f, tau: t });
            *acc.entry(i).or_insert(0) += sign;
        }
        acc.into_iter().filter(|&(_, x)| x != 0).collect()
    }
}

/// `β(h)` over the coordinates of `sys`.
pub fn beta(
    h: &Hypergraph<ColouredLabel>,
    sys: &MembershipSystem,
) -> Result<Vec<i64>, MembershipError> {
    let mut v = vec![0; sys.d()];
    for e in h.edges() {
        let ColouredLabel::Coloured { sigma, f, tau } = &e.label else {
            continue;
        };
        if e.label.is_white() {
            continue;
        }
        let (pos, sign) = sys.orient(sigma);
        let f = f
            .iter()
            .map(|c| sys.palette.index(c))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| MembershipError::UnindexedLabel(e.label.to_string()))?;
        let key = RawKey {
            sigma: pos,
            f,
            tau: tau.iter().copied().collect(),
        };
        let i = *sys
            .index
            .get(&key)
            .ok_or_else(|| MembershipError::UnindexedLabel(e.label.to_string()))?;
        v[i] += sign;
    }
    Ok(v)
}

type ExactOptions = HashSet<(Vec<usize>, Vec<TauTriple>)>;

/// Sound restrictions on colourings: a coordinate whose entries all share one
/// sign is zero in every solution, so labelings producing it are skipped.
struct Pruning {
    /// Non-white occurrences can never be cancelled.
    must_white: HashSet<Label>,
    /// The only non-white `f` a label may take.
    allowed: HashMap<Label, HashSet<Vec<usize>>>,
    /// For the labels of `allowed`: the only non-white `(f, τ)`, read off the
    /// complements in enumerated base labelings.
    exact: HashMap<Label, ExactOptions>,
}

impl Pruning {
    fn new(inst: &Mem1Instance, base_only: &BTreeSet<usize>) -> Self {
        let g = inst.grammar();
        let present: HashSet<&Label> = g.start().edges().iter().map(|e| &e.label).collect();
        let mut must_white = HashSet::new();
        for &l in &present {
            let uncancelled = match l.kind() {
                LabelKind::Fusion | LabelKind::Complement => g
                    .alphabet()
                    .complement_of(l)
                    .is_none_or(|c| !present.contains(c)),
                _ => true,
            };
            if uncancelled {
                must_white.insert(l.clone());
            }
        }
        let candidates = base_candidates(inst);
        let target = inst.target_att();
        let mut forced_f: HashMap<Label, Option<HashSet<Vec<usize>>>> = HashMap::new();
        for (ci, c) in g.components().iter().enumerate() {
            for e in c.edges() {
                let entry = forced_f
                    .entry(e.label.clone())
                    .or_insert_with(|| Some(HashSet::new()));
                if !base_only.contains(&ci) {
                    *entry = None;
                    continue;
                }
                for b in candidates.iter().filter(|b| b.component == ci) {
                    let be = c.edge(&b.edge).expect("base edge");
                    let f: Option<Vec<usize>> = e
                        .att
                        .iter()
                        .map(|v| be.att.iter().position(|u| u == v).map(|i| target[i]))
                        .collect();
                    match (f, entry.as_mut()) {
                        (Some(f), Some(set)) => {
                            set.insert(f);
                        }
                        _ => *entry = None,
                    }
                }
            }
        }
        let mut allowed = HashMap::new();
        for &l in &present {
            if !l.kind().is_fusion_like() {
                continue;
            }
            let Some(comp) = g.alphabet().complement_of(l) else {
                continue;
            };
            if let Some(Some(set)) = forced_f.get(comp) {
                allowed.insert(l.clone(), set.clone());
            }
        }
        Pruning {
            must_white,
            allowed,
            exact: HashMap::new(),
        }
    }

    fn edge_ok(&self, label: &Label, f: &[usize], white: usize) -> bool {
        if f.iter().all(|&c| c == white) {
            return true;
        }
        if self.must_white.contains(label) {
            return false;
        }
        self.allowed.get(label).is_none_or(|s| s.contains(f))
    }

    #[allow(clippy::too_many_arguments)]
    fn record_base(
        &self,
        exact: &mut HashMap<Label, ExactOptions>,
        p: &Prepared,
        colours: &[usize],
        tau: &[Vec<TauTriple>],
        base: usize,
        alphabet: &LabelAlphabet,
        white: usize,
    ) {
        for (ei, e) in p.edges.iter().enumerate() {
            let f: Vec<usize> = e.att.iter().map(|&v| colours[v]).collect();
            if ei == base || (tau[ei].is_empty() && f.iter().all(|&c| c == white)) {
                continue;
            }
            let Some(partner) = alphabet.complement_of(&e.label) else {
                continue;
            };
            if self.allowed.contains_key(partner) {
                let mut t = tau[ei].clone();
                t.sort_unstable();
                exact.entry(partner.clone()).or_default().insert((f, t));
            }
        }
    }

    fn labeled_edge_ok(&self, label: &Label, f: &[usize], tau: &[TauTriple], white: usize) -> bool {
        if !self.allowed.contains_key(label) || (tau.is_empty() && f.iter().all(|&c| c == white)) {
            return true;
        }
        let mut t = tau.to_vec();
        t.sort_unstable();
        self.exact
            .get(label)
            .is_some_and(|s| s.contains(&(f.to_vec(), t)))
    }
}

/// Depth-first vertex colouring in vertex order; each edge is checked once
/// its last attachment is coloured.
fn colour_dfs<B>(
    p: &Prepared,
    palette_len: usize,
    forced: &[Option<usize>],
    prune: Option<&Pruning>,
    base: Option<usize>,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let white = palette_len - 1;
    let nv = p.vertex_count();
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (ei, e) in p.edges.iter().enumerate() {
        if Some(ei) != base {
            if let Some(&m) = e.att.iter().max() {
                closing[m].push(ei);
            }
        }
    }
    let choices: Vec<Vec<usize>> = (0..nv)
        .map(|v| match (forced[v], prune) {
            (Some(c), _) => vec![c],
            (None, Some(pr))
                if p.inc[v]
                    .iter()
                    .all(|&(e, _)| pr.must_white.contains(&p.edges[e].label)) =>
            {
                vec![white]
            }
            _ => (0..palette_len).collect(),
        })
        .collect();

    struct Ctx<'a, B> {
        p: &'a Prepared,
        closing: Vec<Vec<usize>>,
        choices: Vec<Vec<usize>>,
        prune: Option<&'a Pruning>,
        white: usize,
        visit: &'a mut dyn FnMut(&[usize]) -> ControlFlow<B>,
    }
    fn go<B>(cx: &mut Ctx<'_, B>, v: usize, colours: &mut Vec<usize>) -> ControlFlow<B> {
        if v == cx.p.vertex_count() {
            return (cx.visit)(colours);
        }
        for k in 0..cx.choices[v].len() {
            colours.push(cx.choices[v][k]);
            let ok = cx.prune.is_none_or(|pr| {
                cx.closing[v].iter().all(|&e| {
                    let edge = &cx.p.edges[e];
                    let f: Vec<usize> = edge.att.iter().map(|&u| colours[u]).collect();
                    pr.edge_ok(&edge.label, &f, cx.white)
                })
            });
            let r = if ok {
                go(cx, v + 1, colours)
            } else {
                ControlFlow::Continue(())
            };
            colours.pop();
            r?;
        }
        ControlFlow::Continue(())
    }
    let mut cx = Ctx {
        p,
        closing,
        choices,
        prune,
        white,
        visit,
    };
    go(&mut cx, 0, &mut Vec::with_capacity(nv))
}

/// Builds `S^b` and then `S` (components outside `opts.base_only`); `S` is
/// left empty when `S^b` is.
pub fn build_membership_system(
    inst: &Mem1Instance,
    opts: &Mem1Options,
) -> Result<MembershipSystem, MembershipError> {
    let pal = inst.palette();
    let target = inst.target_att();
    let pairs: Vec<PairInfo> = connection_pairs(inst)
        .iter()
        .map(|cp| PairInfo {
            i1: cp.i1,
            i2: cp.i2,
            colour: target[cp.i1 - 1],
        })
        .collect();
    let mut prune = opts
        .prune_colourings
        .then(|| Pruning::new(inst, &opts.base_only));
    let mut sys = MembershipSystem {
        alphabet: inst.grammar().alphabet().clone(),
        palette: pal.clone(),
        keys: Vec::new(),
        index: HashMap::new(),
        columns: Vec::new(),
        bases: Vec::new(),
    };
    let mut labelings = 0usize;
    let white = pal.white();
    let mut seen: HashSet<Vec<(usize, i64)>> = HashSet::new();

    let mut exact = HashMap::new();
    let mut seen_bases: HashSet<Vec<(usize, i64)>> = HashSet::new();
    for b in base_candidates(inst) {
        let p = Prepared::new(&b.graph);
        let e0 = p.edge_index(&b.edge);
        let mut forced = vec![None; p.vertex_count()];
        for (&v, &t) in p.edges[e0].att.iter().zip(target) {
            forced[v] = Some(t);
        }
        let mut serial = 0usize;
        let r = colour_dfs(
            &p,
            pal.len(),
            &forced,
            prune.as_ref(),
            Some(e0),
            &mut |colours| {
                let Some(slots) = tau_slots(&p, colours, &pairs, Some(e0)) else {
                    return ControlFlow::Continue(());
                };
                for_each_tau(&p, &slots, &mut |tau| {
                    labelings += 1;
                    if labelings > opts.max_labelings {
                        return ControlFlow::Break(labelings - 1);
                    }
                    serial += 1;
                    if let Some(pr) = prune.as_ref() {
                        pr.record_base(&mut exact, &p, colours, tau, e0, &sys.alphabet, white);
                    }
                    let beta = sys.beta_raw(&p, colours, tau, Some(e0));
                    if opts.dedup_columns && !seen_bases.insert(beta.clone()) {
                        return ControlFlow::Continue(());
                    }
                    sys.bases.push(Column {
                        tag: format!("B{}:{}#{serial}", b.component, b.edge),
                        component: b.component,
                        beta,
                        witness: RawLabeling {
                            component: b.component,
                            colours: colours.to_vec(),
                            tau: sorted(tau),
                            base: Some(e0),
                        },
                    });
                    ControlFlow::Continue(())
                })
            },
        );
        if let ControlFlow::Break(n) = r {
            return Err(MembershipError::ResourceLimit { labelings: n });
        }
    }
    if sys.bases.is_empty() {
        return Ok(sys);
    }
    if let Some(pr) = prune.as_mut() {
        pr.exact = exact;
    }
    for (ci, c) in inst.grammar().components().iter().enumerate() {
        if opts.base_only.contains(&ci) {
            continue;
        }
        let p = Prepared::new(c);
        let forced = vec![None; p.vertex_count()];
        let mut serial = 0usize;
        let r = colour_dfs(
            &p,
            pal.len(),
            &forced,
            prune.as_ref(),
            None,
            &mut |colours| {
                let Some(slots) = tau_slots(&p, colours, &pairs, None) else {
                    return ControlFlow::Continue(());
                };
                let edge_ok = |e: usize, tau: &[TauTriple]| {
                    let edge = &p.edges[e];
                    let f: Vec<usize> = edge.att.iter().map(|&v| colours[v]).collect();
                    prune
                        .as_ref()
                        .is_none_or(|pr| pr.labeled_edge_ok(&edge.label, &f, tau, white))
                };
                for_each_tau_checked(&p, &slots, &edge_ok, &mut |tau| {
                    labelings += 1;
                    if labelings > opts.max_labelings {
                        return ControlFlow::Break(labelings - 1);
                    }
                    serial += 1;
                    let b = sys.beta_raw(&p, colours, tau, None);
                    if opts.dedup_columns && (b.is_empty() || !seen.insert(b.clone())) {
                        return ControlFlow::Continue(());
                    }
                    sys.columns.push(Column {
                        tag: format!("C{ci}#{serial}"),
                        component: ci,
                        beta: b,
                        witness: RawLabeling {
                            component: ci,
                            colours: colours.to_vec(),
                            tau: sorted(tau),
                            base: None,
                        },
                    });
                    ControlFlow::Continue(())
                })
            },
        );
        if let ControlFlow::Break(n) = r {
            return Err(MembershipError::ResourceLimit { labelings: n });
        }
    }

    Ok(sys)
}

fn sorted(tau: &[Vec<TauTriple>]) -> Vec<Vec<TauTriple>> {
    tau.iter()
        .map(|t| {
            let mut t = t.clone();
            t.sort_unstable();
            t
        })
        .collect()
}
