//! Parikh images of connection-preserving grammars through their
//! linearization: a context-free grammar over label counts whose sentential
//! forms, restricted to balanced vectors, project onto `ψ(L(FG))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diophantine::{solve_nonneg_with, DiophantineError, LinearSystem, SolverLimits};
use crate::fusion::{
    check_connection_preserving, ConnectionCheck, ConnectionViolation, Flavor, FusionGrammar,
    SearchBounds,
};
use crate::hypergraph::{EdgeId, Hypergraph, Label, LabelAlphabet, LabelKind};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParikhError {
    #[error("symbol `{0}` has no Parikh coordinate")]
    UnknownSymbol(String),
    #[error("production for `{0}`: only fusion labels and S are nonterminals")]
    NotNonterminal(String),
    #[error("target has {found} coordinates, expected {expected}")]
    TargetLength { expected: usize, found: usize },
    #[error("the grammar is not connection-preserving")]
    NotConnectionPreserving(Box<ConnectionViolation>),
    #[error("more than {supports} production supports to examine")]
    SupportLimit { supports: usize },
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
}

impl ParikhError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            ParikhError::SupportLimit { .. }
                | ParikhError::Diophantine(DiophantineError::ResourceLimit { .. })
        )
    }
}

/// The coordinate order `a1..at, A1..Af, Ā1..Āf, markers, connectors`; `Āi`
/// is the complement of `Ai`, and each block is sorted by name.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coordinates {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    t: usize,
    f: usize,
    markers: usize,
}

impl Coordinates {
    pub fn of(alphabet: &LabelAlphabet) -> Self {
        let kind = |k| alphabet.of_kind(k).cloned().collect::<Vec<_>>();
        let terminals = kind(LabelKind::Terminal);
        let fusion = kind(LabelKind::Fusion);
        let bars: Vec<Label> = fusion
            .iter()
            .map(|l| {
                alphabet
                    .complement_of(l)
                    .expect("fusion label has a complement")
                    .clone()
            })
            .collect();
        let markers = kind(LabelKind::Marker);
        let connectors = kind(LabelKind::Connector);
        let (t, f, m) = (terminals.len(), fusion.len(), markers.len());
        let labels: Vec<Label> = [terminals, fusion, bars, markers, connectors].concat();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Coordinates {
            labels,
            index,
            t,
            f,
            markers: m,
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of terminal coordinates.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of fusion labels without their complements.
    pub fn f(&self) -> usize {
        self.f
    }

    pub fn index(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    fn marker_range(&self) -> std::ops::Range<usize> {
        let start = self.t + 2 * self.f;
        start..start + self.markers
    }

    /// `pr_t`.
    pub fn project(&self, v: &ParikhVector) -> Vec<u64> {
        v.0[..self.t].to_vec()
    }

    /// `#Ai = #Āi` for every `i` and at least one marker.
    pub fn in_balance(&self, v: &ParikhVector) -> bool {
        let (t, f) = (self.t, self.f);
        (0..f).all(|i| v.0[t + i] == v.0[t + f + i]) && self.marker_range().any(|i| v.0[i] > 0)
    }
}

pub type Word = Vec<Label>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ParikhVector(pub Vec<u64>);

/// `λ(H)`: every label repeated by its count, in coordinate order.
pub fn linearize(h: &Hypergraph, coords: &Coordinates) -> Result<Word, ParikhError> {
    let v = parikh_of(h.edges().iter().map(|e| &e.label), coords)?;
    Ok(coords
        .labels
        .iter()
        .zip(&v.0)
        .flat_map(|(l, &n)| std::iter::repeat_n(l.clone(), n as usize))
        .collect())
}

/// `Ψ(w)`.
pub fn word_parikh(w: &[Label], coords: &Coordinates) -> Result<ParikhVector, ParikhError> {
    parikh_of(w.iter(), coords)
}

/// `ψ(H) = pr_t(Ψ(λ(H)))`.
pub fn psi(h: &Hypergraph, coords: &Coordinates) -> Result<Vec<u64>, ParikhError> {
    Ok(coords.project(&parikh_of(h.edges().iter().map(|e| &e.label), coords)?))
}

fn parikh_of<'a>(
    labels: impl Iterator<Item = &'a Label>,
    coords: &Coordinates,
) -> Result<ParikhVector, ParikhError> {
    let mut v = vec![0u64; coords.len()];
    for l in labels {
        let i = coords
            .index(l)
            .ok_or_else(|| ParikhError::UnknownSymbol(l.to_string()))?;
        v[i] += 1;
    }
    Ok(ParikhVector(v))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Nonterminal {
    Start,
    Label(Label),
}

impl fmt::Display for Nonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonterminal::Start => f.write_str("S"),
            Nonterminal::Label(l) => write!(f, "{}", l.name()),
        }
    }
}

/// The start component and edge a production was read off.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductionOrigin {
    pub component: usize,
    pub edge: EdgeId,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Production {
    pub lhs: Nonterminal,
    pub rhs: Word,
    pub origin: Option<ProductionOrigin>,
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        if self.rhs.is_empty() {
            return f.write_str(" ε");
        }
        for l in &self.rhs {
            write!(f, " {}", l.name())?;
        }
        Ok(())
    }
}

/// Nonterminals are `S` and the fusion-like labels; every other coordinate
/// label is terminal.
#[derive(Clone, Debug)]
pub struct ContextFreeGrammar {
    coords: Coordinates,
    productions: Vec<Production>,
}

impl ContextFreeGrammar {
    pub fn new(coords: Coordinates, productions: Vec<Production>) -> Result<Self, ParikhError> {
        for p in &productions {
            if let Nonterminal::Label(l) = &p.lhs {
                if !l.kind().is_fusion_like() || coords.index(l).is_none() {
                    return Err(ParikhError::NotNonterminal(l.to_string()));
                }
            }
            if let Some(l) = p.rhs.iter().find(|l| coords.index(l).is_none()) {
                return Err(ParikhError::UnknownSymbol(l.to_string()));
            }
        }
        Ok(ContextFreeGrammar {
            coords,
            productions,
        })
    }

    pub fn coords(&self) -> &Coordinates {
        &self.coords
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    fn rhs_vector(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.coords.len()];
        for l in &self.productions[i].rhs {
            v[self.coords.index(l).expect("validated")] += 1;
        }
        v
    }

    /// `Ψ(rhs) − e_lhs`; `S` has no coordinate.
    fn effect(&self, i: usize) -> Vec<i64> {
        let mut v = self.rhs_vector(i);
        if let Nonterminal::Label(l) = &self.productions[i].lhs {
            v[self.coords.index(l).expect("validated")] -= 1;
        }
        v
    }
}

/// `Lin(FG)`'s grammar; markerless grammars are first given a unary marker on
/// every vertex. Productions follow component order, then edge order.
pub fn build_cfg(g: &FusionGrammar) -> ContextFreeGrammar {
    let g = match g.flavor() {
        Flavor::Markerless => g.lift_with_markers("mu").0,
        Flavor::Full => g.clone(),
    };
    let coords = Coordinates::of(g.alphabet());
    let mut productions = Vec::new();
    for (ci, c) in g.components().iter().enumerate() {
        let all = linearize(c, &coords).expect("grammar labels have coordinates");
        for e in c.edges() {
            let origin = Some(ProductionOrigin {
                component: ci,
                edge: e.id.clone(),
            });
            match e.label.kind() {
                LabelKind::Fusion | LabelKind::Complement => {
                    let bar = g
                        .alphabet()
                        .complement_of(&e.label)
                        .expect("complement")
                        .clone();
                    let mut rhs = all.clone();
                    let at = rhs
                        .iter()
                        .position(|l| *l == e.label)
                        .expect("edge label occurs");
                    rhs.remove(at);
                    productions.push(Production {
                        lhs: Nonterminal::Label(bar),
                        rhs,
                        origin,
                    });
                }
                LabelKind::Marker => productions.push(Production {
                    lhs: Nonterminal::Start,
                    rhs: all.clone(),
                    origin,
                }),
                _ => {}
            }
        }
    }
    ContextFreeGrammar::new(coords, productions).expect("built from the grammar's alphabet")
}

/// Production index to positive count.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ProductionMultiset(pub BTreeMap<usize, u64>);

impl ProductionMultiset {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().filter(|(_, &k)| k > 0).map(|(&i, _)| i)
    }
}

/// `Ψ` of the sentential form reached by applying `m` from `S`, whenever
/// every nonterminal count stays nonnegative; `S` is not a coordinate.
pub fn sentential_parikh(cfg: &ContextFreeGrammar, m: &ProductionMultiset) -> Option<ParikhVector> {
    let mut v = vec![0i64; cfg.coords.len()];
    let mut start = 1i64;
    for (&i, &k) in &m.0 {
        let k = i64::try_from(k).ok()?;
        if cfg.productions[i].lhs == Nonterminal::Start {
            start -= k;
        }
        for (x, d) in v.iter_mut().zip(cfg.effect(i)) {
            *x += k * d;
        }
    }
    (start >= 0 && v.iter().all(|&x| x >= 0))
        .then(|| ParikhVector(v.into_iter().map(|x| x as u64).collect()))
}

/// Some derivation `S ⇒⁺ w` uses each production exactly `m` times: every
/// nonterminal stays available and every production in the support is
/// reachable from `S` through the support.
pub fn realizable(cfg: &ContextFreeGrammar, m: &ProductionMultiset) -> bool {
    m.total() > 0 && sentential_parikh(cfg, m).is_some() && support_reachable(cfg, m)
}

#[derive(Clone, Debug)]
pub struct ParikhOptions {
    /// Bounded search for a connection-preservation violation, run first.
    pub refute: Option<SearchBounds>,
    pub max_supports: usize,
    pub solver: SolverLimits,
}

impl Default for ParikhOptions {
    fn default() -> Self {
        ParikhOptions {
            refute: Some(SearchBounds::new(3, 3)),
            max_supports: 1 << 16,
            solver: SolverLimits::default(),
        }
    }
}

/// A realizable multiset whose sentential form is balanced and projects
/// onto the target.
#[derive(Clone, Debug)]
pub struct ParikhCertificate {
    pub multiset: ProductionMultiset,
    pub vector: ParikhVector,
}

#[derive(Clone, Debug)]
pub struct ParikhAnswer {
    pub member: bool,
    pub cfg: ContextFreeGrammar,
    pub certificate: Option<ParikhCertificate>,
}

/// Whether `target ∈ pr_t(Ψ(Lin(FG)) ∩ Balance)`, which equals `ψ(L(FG))`
/// when `g` is connection-preserving; that property is the caller's claim.
pub fn decide_parikh_membership(
    g: &FusionGrammar,
    target: &[u64],
    opts: &ParikhOptions,
) -> Result<ParikhAnswer, ParikhError> {
    if let Some(bounds) = opts.refute {
        if let ConnectionCheck::Violation(v) = check_connection_preserving(g, bounds) {
            return Err(ParikhError::NotConnectionPreserving(v));
        }
    }
    let cfg = build_cfg(g);
    let coords = cfg.coords();
    if target.len() != coords.t() {
        return Err(ParikhError::TargetLength {
            expected: coords.t(),
            found: target.len(),
        });
    }
    let certificate = search(&cfg, target, opts)?;
    Ok(ParikhAnswer {
        member: certificate.is_some(),
        cfg,
        certificate,
    })
}

fn search(
    cfg: &ContextFreeGrammar,
    target: &[u64],
    opts: &ParikhOptions,
) -> Result<Option<ParikhCertificate>, ParikhError> {
    // One representative per distinct (lhs, Ψ(rhs)).
    let mut seen = BTreeSet::new();
    let reps: Vec<usize> = (0..cfg.productions.len())
        .filter(|&i| seen.insert((cfg.productions[i].lhs.clone(), cfg.rhs_vector(i))))
        .collect();
    let (starts, rest): (Vec<usize>, Vec<usize>) = reps
        .iter()
        .partition(|&&i| cfg.productions[i].lhs == Nonterminal::Start);

    let mut supports = 0usize;
    for &s in &starts {
        // Productions whose lhs is reachable from `s` at all.
        let useful: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&i| reachable_from(cfg, s, &rest, i))
            .collect();
        if solve_for(cfg, target, s, &[], &useful, opts.solver)?.is_none() {
            continue;
        }
        let remaining = opts.max_supports.saturating_sub(supports);
        if useful.len() > 30 || (1usize << useful.len()) > remaining {
            return Err(ParikhError::SupportLimit {
                supports: opts.max_supports,
            });
        }
        for mask in 0..(1usize << useful.len()) {
            supports += 1;
            let support: Vec<usize> = (0..useful.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| useful[b])
                .collect();
            let mut probe = ProductionMultiset::default();
            probe.0.insert(s, 1);
            for &i in &support {
                probe.0.insert(i, 1);
            }
            if !support_reachable(cfg, &probe) {
                continue;
            }
            if let Some(m) = solve_for(cfg, target, s, &support, &[], opts.solver)? {
                let vector = sentential_parikh(cfg, &m).expect("solution keeps counts nonnegative");
                debug_assert!(realizable(cfg, &m) && coords_ok(cfg, &vector, target));
                return Ok(Some(ParikhCertificate {
                    multiset: m,
                    vector,
                }));
            }
        }
    }
    Ok(None)
}

fn coords_ok(cfg: &ContextFreeGrammar, v: &ParikhVector, target: &[u64]) -> bool {
    cfg.coords.in_balance(v) && cfg.coords.project(v) == target
}

fn reachable_from(cfg: &ContextFreeGrammar, s: usize, rest: &[usize], i: usize) -> bool {
    let mut reached: BTreeSet<&Label> = cfg.productions[s].rhs.iter().collect();
    loop {
        let before = reached.len();
        for &j in rest {
            if let Nonterminal::Label(l) = &cfg.productions[j].lhs {
                if reached.contains(l) {
                    reached.extend(cfg.productions[j].rhs.iter());
                }
            }
        }
        if reached.len() == before {
            break;
        }
    }
    matches!(&cfg.productions[i].lhs, Nonterminal::Label(l) if reached.contains(l))
}

fn support_reachable(cfg: &ContextFreeGrammar, m: &ProductionMultiset) -> bool {
    let support: Vec<usize> = m.support().collect();
    let mut reached: BTreeSet<Nonterminal> = BTreeSet::from([Nonterminal::Start]);
    let mut used = vec![false; support.len()];
    loop {
        let mut grew = false;
        for (u, &i) in used.iter_mut().zip(&support) {
            let p = &cfg.productions[i];
            if !*u && reached.contains(&p.lhs) {
                *u = true;
                grew = true;
                reached.extend(p.rhs.iter().map(|l| Nonterminal::Label(l.clone())));
            }
        }
        if !grew {
            return used.iter().all(|&u| u);
        }
    }
}

/// Counts `1` for `s`, `≥ 1` for `forced`, `≥ 0` for `free`, all others `0`,
/// such that the sentential form is nonnegative, balanced and projects onto
/// `target`.
fn solve_for(
    cfg: &ContextFreeGrammar,
    target: &[u64],
    s: usize,
    forced: &[usize],
    free: &[usize],
    limits: SolverLimits,
) -> Result<Option<ProductionMultiset>, ParikhError> {
    let c = &cfg.coords;
    let (t, f) = (c.t(), c.f());
    let mut base = cfg.rhs_vector(s);
    for &i in forced {
        for (x, d) in base.iter_mut().zip(cfg.effect(i)) {
            *x += d;
        }
    }
    let vars: Vec<usize> = forced.iter().chain(free).copied().collect();
    let effects: Vec<Vec<i64>> = vars.iter().map(|&i| cfg.effect(i)).collect();
    let markers = c.marker_range();
    // Rows: terminals, balance, nonterminal availability, markers.
    let n_rows = t + f + 2 * f + 1;
    let row = |v: &[i64]| -> Vec<i64> {
        let mut r = Vec::with_capacity(n_rows);
        r.extend_from_slice(&v[..t]);
        r.extend((0..f).map(|i| v[t + i] - v[t + f + i]));
        r.extend_from_slice(&v[t..t + 2 * f]);
        r.push(markers.clone().map(|i| v[i]).sum());
        r
    };
    let mut columns: Vec<Vec<i64>> = effects.iter().map(|e| row(e)).collect();
    for k in 0..2 * f + 1 {
        let mut slack = vec![0; n_rows];
        slack[t + f + k] = -1;
        columns.push(slack);
    }
    let b = row(&base);
    let mut rhs: Vec<i64> = Vec::with_capacity(n_rows);
    rhs.extend(target.iter().zip(&b).map(|(&x, &bk)| x as i64 - bk));
    rhs.extend(b[t..n_rows].iter().map(|&bk| -bk));
    *rhs.last_mut().expect("marker row") += 1;
    let ls = LinearSystem::from_columns(columns, rhs)?;
    let Some(x) = solve_nonneg_with(&ls, limits)? else {
        return Ok(None);
    };
    let mut m = ProductionMultiset::default();
    m.0.insert(s, 1);
    for (j, &i) in vars.iter().enumerate() {
        let k = x[j] + u64::from(j < forced.len());
        if k > 0 {
            *m.0.entry(i).or_insert(0) += k;
        }
    }
    Ok(Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a, fusion_a, loop_fg, mu, z_component};

    fn loop_cfg() -> ContextFreeGrammar {
        build_cfg(&loop_fg())
    }

    fn ms(pairs: &[(usize, u64)]) -> ProductionMultiset {
        ProductionMultiset(pairs.iter().copied().collect())
    }

    #[test]
    fn linearization_follows_coordinate_order() {
        let g = crate::fixtures::fg_ex();
        let c = Coordinates::of(g.alphabet());
        let names = |w: Word| {
            w.iter()
                .map(|l| l.name().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        assert_eq!(
            names(linearize(&z_component(1, false), &c).unwrap()),
            "B A_bar"
        );
        assert_eq!(
            names(linearize(&z_component(0, false), &c).unwrap()),
            "a A C"
        );
        assert!(linearize(&Hypergraph::empty(), &c).unwrap().is_empty());
    }

    #[test]
    fn loop_grammar_productions() {
        let cfg = loop_cfg();
        let shown: Vec<String> = cfg.productions().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["A_bar -> mu", "S -> A mu", "A -> a"]);
        let c = cfg.coords();
        let (fa, fa_bar) = fusion_a();
        assert_eq!(c.labels(), &[a(), fa, fa_bar, mu()]);
        assert_eq!(
            word_parikh(&[a(), mu()], c).unwrap(),
            ParikhVector(vec![1, 0, 0, 1])
        );
        assert_eq!(word_parikh(&[], c).unwrap(), ParikhVector(vec![0; 4]));
    }

    #[test]
    fn realizability_examples() {
        let cfg = loop_cfg();
        assert!(realizable(&cfg, &ms(&[(1, 1), (2, 1)])));
        assert!(!realizable(&cfg, &ms(&[(2, 1)])));
        assert!(!realizable(&cfg, &ms(&[(1, 1), (2, 2)])));
        assert!(!realizable(&cfg, &ms(&[])));
    }

    #[test]
    fn loop_grammar_vectors() {
        let opts = ParikhOptions::default();
        let yes = decide_parikh_membership(&loop_fg(), &[1], &opts).unwrap();
        assert!(yes.member);
        let cert = yes.certificate.unwrap();
        assert!(realizable(&yes.cfg, &cert.multiset));
        assert!(
            !decide_parikh_membership(&loop_fg(), &[0], &opts)
                .unwrap()
                .member
        );
        assert!(
            !decide_parikh_membership(&loop_fg(), &[2], &opts)
                .unwrap()
                .member
        );
        assert!(matches!(
            decide_parikh_membership(&loop_fg(), &[1, 2], &opts),
            Err(ParikhError::TargetLength {
                expected: 1,
                found: 2
            })
        ));
    }
}
