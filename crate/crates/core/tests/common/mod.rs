//! Seeded generators shared by the property and acceptance suites.
#![allow(dead_code)]

use fusegraph::fusion::{FusionGrammar, FusionPairSet};
use fusegraph::hypergraph::{
    merge_disjoint, Edge, EdgeId, Hypergraph, Label, LabelAlphabet, LabelKind, VertexId,
};
use proptest::test_runner::{Config, RngSeed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// `FUSEGRAPH_TEST_SEED` or the fixed default.
pub fn seed() -> u64 {
    std::env::var("FUSEGRAPH_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn t2() -> Label {
    Label::terminal("a", 2)
}

pub fn t1() -> Label {
    Label::terminal("t", 1)
}

pub fn f2() -> (Label, Label) {
    Label::fusion_pair("A", "A_bar", 2)
}

pub fn f1() -> (Label, Label) {
    Label::fusion_pair("B", "B_bar", 1)
}

pub fn alphabet() -> LabelAlphabet {
    let (a, ab) = f2();
    let (b, bb) = f1();
    LabelAlphabet::new([t2(), t1(), a, ab, b, bb]).unwrap()
}

pub fn pool() -> Vec<Label> {
    let (a, ab) = f2();
    let (b, bb) = f1();
    vec![t2(), t1(), a, ab, b, bb]
}

/// A hypergraph on up to `max_v` vertices and `max_e` edges over `pool()`;
/// vertices may be isolated.
pub fn random_hypergraph(rng: &mut impl Rng, max_v: usize, max_e: usize) -> Hypergraph {
    let labels = pool();
    let nv = rng.gen_range(1..=max_v);
    let ne = rng.gen_range(0..=max_e);
    let vs: Vec<VertexId> = (0..nv).map(|i| VertexId::new(format!("v{i}"))).collect();
    let edges: Vec<Edge> = (0..ne)
        .map(|i| {
            let l = labels.choose(rng).unwrap().clone();
            let att: Vec<VertexId> = (0..l.arity())
                .map(|_| vs.choose(rng).unwrap().clone())
                .collect();
            Edge::new(format!("e{i}"), l, att)
        })
        .collect();
    Hypergraph::new(vs, edges).unwrap()
}

/// A random valid pair set: a random partial matching of complementary edges.
pub fn random_pairs(rng: &mut impl Rng, h: &Hypergraph) -> FusionPairSet {
    let mut pos: Vec<&Edge> = h
        .edges()
        .iter()
        .filter(|e| e.label.kind() == LabelKind::Fusion)
        .collect();
    let mut neg: Vec<&Edge> = h
        .edges()
        .iter()
        .filter(|e| e.label.kind() == LabelKind::Complement)
        .collect();
    pos.shuffle(rng);
    neg.shuffle(rng);
    let mut pairs: Vec<(EdgeId, EdgeId)> = Vec::new();
    for p in pos {
        if rng.gen_bool(0.2) {
            continue;
        }
        if let Some(i) = neg.iter().position(|n| p.label.is_complement_of(&n.label)) {
            let n = neg.remove(i);
            pairs.push((p.id.clone(), n.id.clone()));
        }
    }
    FusionPairSet::new(pairs)
}

/// A connected component named `C{k}` with 1..=3 vertices and 1..=3 edges
/// (or, rarely, a single isolated vertex).
pub fn random_component(rng: &mut impl Rng, k: usize) -> Hypergraph {
    let labels = pool();
    if rng.gen_bool(0.05) {
        return Hypergraph::new(vec![VertexId::new(format!("C{k}.v0"))], vec![]).unwrap();
    }
    let ne = rng.gen_range(1..=3);
    let mut nv = 0usize;
    let mut edges = Vec::new();
    for i in 0..ne {
        let l = labels.choose(rng).unwrap().clone();
        let mut att = Vec::new();
        for j in 0..l.arity() {
            let v = if nv == 0 || (j > 0 && nv < 3 && rng.gen_bool(0.5)) {
                nv += 1;
                nv - 1
            } else {
                rng.gen_range(0..nv)
            };
            att.push(VertexId::new(format!("C{k}.v{v}")));
        }
        edges.push(Edge::new(format!("C{k}.e{i}"), l, att));
    }
    let vs: Vec<VertexId> = (0..nv)
        .map(|v| VertexId::new(format!("C{k}.v{v}")))
        .collect();
    Hypergraph::new(vs, edges).unwrap()
}

/// Markerless grammar with 1..=3 connected components of ≤ 3 edges.
pub fn random_grammar(rng: &mut impl Rng) -> FusionGrammar {
    let k = rng.gen_range(1..=3);
    let comps: Vec<Hypergraph> = (0..k).map(|i| random_component(rng, i)).collect();
    let start = merge_disjoint(&comps).unwrap();
    FusionGrammar::markerless(alphabet(), start).unwrap()
}

/// One terminal edge, connected, no isolated vertices.
pub fn random_single_edge_target(rng: &mut impl Rng) -> Hypergraph {
    let l = if rng.gen_bool(0.7) { t2() } else { t1() };
    let att: Vec<VertexId> = if l.arity() == 2 && rng.gen_bool(0.5) {
        vec!["x".into(), "x".into()]
    } else {
        (0..l.arity())
            .map(|i| VertexId::new(format!("x{i}")))
            .collect()
    };
    let mut vs = att.clone();
    vs.dedup();
    Hypergraph::new(vs, vec![Edge::new("target", l, att)]).unwrap()
}

/// Renames every vertex and edge id by a fixed bijection.
pub fn rename_all(h: &Hypergraph) -> Hypergraph {
    h.rename(
        |v| {
            VertexId::new(format!(
                "r.{}",
                v.as_str().chars().rev().collect::<String>()
            ))
        },
        |e| {
            EdgeId::new(format!(
                "r.{}",
                e.as_str().chars().rev().collect::<String>()
            ))
        },
    )
    .unwrap()
}
