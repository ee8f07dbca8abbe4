use std::collections::{BTreeMap, HashMap};

use super::graph::{EdgeLabel, Hypergraph};
use super::ids::{EdgeId, VertexId};

/// A label- and attachment-preserving pair of bijections.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Isomorphism {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

/// Index form shared by both graphs during a search.
struct Indexed<'a, L> {
    h: &'a Hypergraph<L>,
    att: Vec<Vec<usize>>,
    incidences: Vec<Vec<(usize, usize)>>,
}

impl<'a, L: EdgeLabel> Indexed<'a, L> {
    fn new(h: &'a Hypergraph<L>) -> Self {
        let att: Vec<Vec<usize>> = h
            .edges()
            .iter()
            .map(|e| {
                e.att
                    .iter()
                    .map(|v| h.vertex_index(v).expect("valid"))
                    .collect()
            })
            .collect();
        let mut incidences = vec![Vec::new(); h.vertex_count()];
        for (ei, a) in att.iter().enumerate() {
            for (pos, &v) in a.iter().enumerate() {
                incidences[v].push((ei, pos));
            }
        }
        Indexed { h, att, incidences }
    }
}

/// Colour refinement run on both graphs with a shared colour table, so equal
/// colours mean equal refined signatures.
fn refine<L: EdgeLabel>(g1: &Indexed<L>, g2: &Indexed<L>) -> Option<(Vec<usize>, Vec<usize>)> {
    let label_ids: BTreeMap<&L, usize> =
        g1.h.edges()
            .iter()
            .chain(g2.h.edges())
            .map(|e| &e.label)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
    let lab1: Vec<usize> = g1.h.edges().iter().map(|e| label_ids[&e.label]).collect();
    let lab2: Vec<usize> = g2.h.edges().iter().map(|e| label_ids[&e.label]).collect();

    let mut c1 = vec![0usize; g1.h.vertex_count()];
    let mut c2 = vec![0usize; g2.h.vertex_count()];
    let mut classes = 1;
    loop {
        let mut table: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sig = |g: &Indexed<L>, lab: &[usize], col: &[usize], v: usize| {
            let mut s: Vec<Vec<usize>> = g.incidences[v]
                .iter()
                .map(|&(e, pos)| {
                    let mut x = vec![lab[e], pos];
                    x.extend(g.att[e].iter().map(|&u| col[u]));
                    x
                })
                .collect();
            s.sort();
            let mut flat = vec![col[v]];
            for x in s {
                flat.push(usize::MAX);
                flat.extend(x);
            }
            let next = table.len();
            *table.entry(flat).or_insert(next)
        };
        let n1: Vec<usize> = (0..c1.len()).map(|v| sig(g1, &lab1, &c1, v)).collect();
        let n2: Vec<usize> = (0..c2.len()).map(|v| sig(g2, &lab2, &c2, v)).collect();
        let mut h1 = n1.clone();
        let mut h2 = n2.clone();
        h1.sort_unstable();
        h2.sort_unstable();
        if h1 != h2 {
            return None;
        }
        let count = table.len();
        c1 = n1;
        c2 = n2;
        if count == classes {
            return Some((c1, c2));
        }
        classes = count;
    }
}

/// Finds an isomorphism by backtracking over edges, guided by refined vertex
/// colours; isolated vertices are matched by count.
pub fn find_isomorphism<L: EdgeLabel>(
    h1: &Hypergraph<L>,
    h2: &Hypergraph<L>,
) -> Option<Isomorphism> {
    if h1.vertex_count() != h2.vertex_count()
        || h1.edge_count() != h2.edge_count()
        || h1.label_counts() != h2.label_counts()
        || h1.isolated_vertices().len() != h2.isolated_vertices().len()
    {
        return None;
    }
    let g1 = Indexed::new(h1);
    let g2 = Indexed::new(h2);
    let (col1, col2) = refine(&g1, &g2)?;

    let order = edge_order(&g1, &col1);
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(order.len());
    for &e1 in &order {
        let key1: Vec<usize> = g1.att[e1].iter().map(|&v| col1[v]).collect();
        let label = &h1.edges()[e1].label;
        candidates.push(
            (0..h2.edge_count())
                .filter(|&e2| {
                    &h2.edges()[e2].label == label
                        && g2.att[e2].iter().map(|&v| col2[v]).eq(key1.iter().copied())
                })
                .collect(),
        );
    }

    let mut state = Search {
        g1: &g1,
        g2: &g2,
        vmap: vec![usize::MAX; h1.vertex_count()],
        vinv: vec![usize::MAX; h2.vertex_count()],
        emap: vec![usize::MAX; h1.edge_count()],
        eused: vec![false; h2.edge_count()],
    };
    if !state.extend(&order, &candidates, 0) {
        return None;
    }

    let mut vertices = BTreeMap::new();
    for (v1, &v2) in state.vmap.iter().enumerate() {
        if v2 != usize::MAX {
            vertices.insert(h1.vertices()[v1].clone(), h2.vertices()[v2].clone());
        }
    }
    let iso1 = h1.isolated_vertices();
    let iso2 = h2.isolated_vertices();
    for (a, b) in iso1.into_iter().zip(iso2) {
        vertices.insert(a.clone(), b.clone());
    }
    let edges = state
        .emap
        .iter()
        .enumerate()
        .map(|(e1, &e2)| (h1.edges()[e1].id.clone(), h2.edges()[e2].id.clone()))
        .collect();
    Some(Isomorphism { vertices, edges })
}

pub fn is_isomorphic<L: EdgeLabel>(h1: &Hypergraph<L>, h2: &Hypergraph<L>) -> bool {
    find_isomorphism(h1, h2).is_some()
}

/// Rarest edge colour first, then edges adjacent to already ordered ones.
fn edge_order<L: EdgeLabel>(g: &Indexed<L>, col: &[usize]) -> Vec<usize> {
    let m = g.att.len();
    let key = |e: usize| -> (usize, Vec<usize>) {
        (
            g.h.edges()
                .iter()
                .filter(|x| x.label == g.h.edges()[e].label)
                .count(),
            g.att[e].iter().map(|&v| col[v]).collect(),
        )
    };
    let mut placed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut vertex_seen = vec![false; g.h.vertex_count()];
    while order.len() < m {
        let next = (0..m)
            .filter(|&e| !placed[e])
            .max_by_key(|&e| {
                let touching = g.att[e].iter().filter(|&&v| vertex_seen[v]).count();
                let (rarity, _) = key(e);
                (touching, std::cmp::Reverse(rarity), std::cmp::Reverse(e))
            })
            .expect("unplaced edge exists");
        placed[next] = true;
        for &v in &g.att[next] {
            vertex_seen[v] = true;
        }
        order.push(next);
    }
    order
}

struct Search<'a, 'b, L> {
    g1: &'a Indexed<'b, L>,
    g2: &'a Indexed<'b, L>,
    vmap: Vec<usize>,
    vinv: Vec<usize>,
    emap: Vec<usize>,
    eused: Vec<bool>,
}

impl<L> Search<'_, '_, L> {
    fn extend(&mut self, order: &[usize], candidates: &[Vec<usize>], k: usize) -> bool {
        if k == order.len() {
            return true;
        }
        let e1 = order[k];
        for &e2 in &candidates[k] {
            if self.eused[e2] {
                continue;
            }
            let mut newly = Vec::new();
            let mut ok = true;
            for (&v1, &v2) in self.g1.att[e1].iter().zip(&self.g2.att[e2]) {
                if self.vmap[v1] == usize::MAX && self.vinv[v2] == usize::MAX {
                    self.vmap[v1] = v2;
                    self.vinv[v2] = v1;
                    newly.push(v1);
                } else if self.vmap[v1] != v2 {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.emap[e1] = e2;
                self.eused[e2] = true;
                if self.extend(order, candidates, k + 1) {
                    return true;
                }
                self.eused[e2] = false;
                self.emap[e1] = usize::MAX;
            }
            for v1 in newly {
                self.vinv[self.vmap[v1]] = usize::MAX;
                self.vmap[v1] = usize::MAX;
            }
        }
        false
    }
}

/// Edge-only check for hypergraphs without isolated vertices: a label-preserving
/// edge bijection that preserves which attachment positions coincide induces an
/// isomorphism.
///
/// Falls back to [`is_isomorphic`] when either side has isolated vertices.
pub fn edge_bijection_isomorphic<L: EdgeLabel>(h1: &Hypergraph<L>, h2: &Hypergraph<L>) -> bool {
    if !h1.isolated_vertices().is_empty() || !h2.isolated_vertices().is_empty() {
        return is_isomorphic(h1, h2);
    }
    if h1.vertex_count() != h2.vertex_count()
        || h1.edge_count() != h2.edge_count()
        || h1.label_counts() != h2.label_counts()
    {
        return false;
    }
    let e1 = h1.edges();
    let e2 = h2.edges();
    let mut phi: Vec<usize> = Vec::with_capacity(e1.len());
    let mut used = vec![false; e2.len()];

    fn coincide<L>(
        a: &super::graph::Edge<L>,
        i: usize,
        b: &super::graph::Edge<L>,
        j: usize,
    ) -> bool {
        a.att[i] == b.att[j]
    }

    fn go<L: EdgeLabel>(
        e1: &[super::graph::Edge<L>],
        e2: &[super::graph::Edge<L>],
        phi: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let k = phi.len();
        if k == e1.len() {
            return true;
        }
        let a = &e1[k];
        for c in 0..e2.len() {
            if used[c] || e2[c].label != a.label {
                continue;
            }
            let b = &e2[c];
            let consistent = (0..=k).all(|prev| {
                let (pa, pb) = if prev == k {
                    (a, b)
                } else {
                    (&e1[prev], &e2[phi[prev]])
                };
                (0..a.att.len()).all(|i| {
                    (0..pa.att.len()).all(|j| coincide(a, i, pa, j) == coincide(b, i, pb, j))
                })
            });
            if consistent {
                used[c] = true;
                phi.push(c);
                if go(e1, e2, phi, used) {
                    return true;
                }
                phi.pop();
                used[c] = false;
            }
        }
        false
    }

    go(e1, e2, &mut phi, &mut used)
}

/// Cheap isomorphism invariant used to bucket hypergraphs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Invariant<L> {
    vertices: usize,
    labels: Vec<(L, usize)>,
    degrees: Vec<usize>,
}

fn invariant<L: EdgeLabel>(h: &Hypergraph<L>) -> Invariant<L> {
    let mut degrees: Vec<usize> = h
        .vertices()
        .iter()
        .map(|v| {
            h.edges()
                .iter()
                .flat_map(|e| e.att.iter())
                .filter(|u| *u == v)
                .count()
        })
        .collect();
    degrees.sort_unstable();
    Invariant {
        vertices: h.vertex_count(),
        labels: h
            .label_counts()
            .into_iter()
            .map(|(l, c)| (l.clone(), c))
            .collect(),
        degrees,
    }
}

/// A set of hypergraphs up to isomorphism; the first inserted member of each
/// class is its representative.
#[derive(Clone, Debug)]
pub struct IsoClasses<L: EdgeLabel> {
    buckets: HashMap<Invariant<L>, Vec<usize>>,
    members: Vec<Hypergraph<L>>,
}

impl<L: EdgeLabel> Default for IsoClasses<L> {
    fn default() -> Self {
        IsoClasses {
            buckets: HashMap::new(),
            members: Vec::new(),
        }
    }
}

impl<L: EdgeLabel> IsoClasses<L> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of the class containing `h`, if any.
    pub fn find(&self, h: &Hypergraph<L>) -> Option<usize> {
        let bucket = self.buckets.get(&invariant(h))?;
        bucket
            .iter()
            .copied()
            .find(|&i| is_isomorphic(&self.members[i], h))
    }

    /// Inserts `h` unless an isomorphic member exists; returns the class index
    /// and whether it is new.
    pub fn insert(&mut self, h: Hypergraph<L>) -> (usize, bool) {
        let inv = invariant(&h);
        let bucket = self.buckets.entry(inv).or_default();
        if let Some(&i) = bucket
            .iter()
            .find(|&&i| is_isomorphic(&self.members[i], &h))
        {
            return (i, false);
        }
        let i = self.members.len();
        bucket.push(i);
        self.members.push(h);
        (i, true)
    }

    pub fn contains(&self, h: &Hypergraph<L>) -> bool {
        self.find(h).is_some()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representatives(&self) -> &[Hypergraph<L>] {
        &self.members
    }

    pub fn into_representatives(self) -> Vec<Hypergraph<L>> {
        self.members
    }
}
