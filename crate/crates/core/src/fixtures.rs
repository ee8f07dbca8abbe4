//! Small named grammars and hypergraphs used by tests, benches and the CLI
//! fixture files.
//!
//! Vertex ids are `Z{i}.{name}`, edge ids `Z{i}.{label}` (with a trailing
//! index when a label repeats in one component).

use crate::fusion::{FusionGrammar, FusionPairSet};
use crate::hypergraph::{merge_disjoint, Hypergraph, Label, LabelAlphabet, LabelKind};

pub fn a() -> Label {
    Label::terminal("a", 2)
}

pub fn b() -> Label {
    Label::terminal("b", 2)
}

pub fn c() -> Label {
    Label::terminal("c", 3)
}

/// `b` as a marker.
pub fn b_marker() -> Label {
    Label::marker("b", 2)
}

/// `c` as a connector.
pub fn c_connector() -> Label {
    Label::connector("c", 3)
}

fn fusion(name: &str) -> (Label, Label) {
    Label::fusion_pair(name, &format!("{name}_bar"), 2)
}

pub fn fusion_a() -> (Label, Label) {
    fusion("A")
}

pub fn fusion_b() -> (Label, Label) {
    fusion("B")
}

pub fn fusion_c() -> (Label, Label) {
    fusion("C")
}

fn fusion_labels() -> Vec<Label> {
    let mut out = Vec::new();
    for (l, r) in [fusion_a(), fusion_b(), fusion_c()] {
        out.push(l);
        out.push(r);
    }
    out
}

/// `{a, b, c}` terminal, `{A, B, C}` fusion.
pub fn ex_alphabet() -> LabelAlphabet {
    let mut labels = vec![a(), b(), c()];
    labels.extend(fusion_labels());
    LabelAlphabet::new(labels).expect("valid alphabet")
}

/// `a` terminal, `b` marker, `c` connector, `{A, B, C}` fusion.
pub fn exp_alphabet() -> LabelAlphabet {
    let mut labels = vec![a(), b_marker(), c_connector()];
    labels.extend(fusion_labels());
    LabelAlphabet::new(labels).expect("valid alphabet")
}

/// The `i`-th start component (`0..=6`); `marked` gives `b` and `c` their
/// marker/connector kinds.
pub fn z_component(i: usize, marked: bool) -> Hypergraph {
    let (fa, fa_bar) = fusion_a();
    let (fb, fb_bar) = fusion_b();
    let (fc, fc_bar) = fusion_c();
    let (lb, lc) = if marked {
        (b_marker(), c_connector())
    } else {
        (b(), c())
    };
    let v = |s: &str| format!("Z{i}.{s}");
    let builder = Hypergraph::builder();
    let builder = match i {
        0 => builder
            .edge(v("a"), a(), &[v("L"), v("R")])
            .edge(v("A"), fa, &[v("L"), v("O")])
            .edge(v("C"), fc, &[v("R"), v("O")]),
        1 => builder.edge(v("A_bar"), fa_bar, &[v("v1"), v("v2")]).edge(
            v("B"),
            fb,
            &[v("v2"), v("v3")],
        ),
        2 => builder.edge(v("C_bar"), fc_bar, &[v("v1"), v("v2")]).edge(
            v("B"),
            fb,
            &[v("v2"), v("v3")],
        ),
        3 => builder.edge(v("A_bar"), fa_bar, &[v("v1"), v("v2")]).edge(
            v("B"),
            fb,
            &[v("v2"), v("v1")],
        ),
        4 => builder.edge(v("B_bar"), fb_bar, &[v("v2"), v("v1")]).edge(
            v("C_bar"),
            fc_bar,
            &[v("v1"), v("v2")],
        ),
        5 => builder
            .edge(v("b1"), lb.clone(), &[v("L1"), v("L2")])
            .edge(v("b2"), lb, &[v("L1"), v("L3")])
            .edge(v("A_bar"), fa_bar, &[v("L"), v("O")])
            .edge(v("c"), lc, &[v("L"), v("O"), v("L1")]),
        6 => builder
            .edge(v("a"), a(), &[v("R1"), v("R1")])
            .edge(v("C_bar"), fc_bar, &[v("R"), v("O")])
            .edge(v("c"), lc, &[v("R"), v("O"), v("R1")]),
        _ => panic!("no start component {i}"),
    };
    builder.build().expect("well-formed component")
}

fn z_sum(indices: &[usize], marked: bool) -> Hypergraph {
    let parts: Vec<Hypergraph> = indices.iter().map(|&i| z_component(i, marked)).collect();
    merge_disjoint(&parts).expect("component ids are disjoint")
}

/// The seven-component start hypergraph.
pub fn z_ex(marked: bool) -> Hypergraph {
    z_sum(&[0, 1, 2, 3, 4, 5, 6], marked)
}

/// The markerless running example over `Z`.
pub fn fg_ex() -> FusionGrammar {
    FusionGrammar::markerless(ex_alphabet(), z_ex(false)).expect("valid grammar")
}

/// The running example with `b` a marker and `c` a connector.
pub fn fgp_ex() -> FusionGrammar {
    FusionGrammar::full(exp_alphabet(), z_ex(true)).expect("valid grammar")
}

/// An `a`-loop on one vertex.
pub fn h_ex1() -> Hypergraph {
    Hypergraph::builder()
        .edge("a", a(), &["u", "u"])
        .build()
        .expect("valid")
}

/// One `a`-edge between two distinct vertices.
pub fn h_ex2() -> Hypergraph {
    Hypergraph::builder()
        .edge("a", a(), &["u1", "u2"])
        .build()
        .expect("valid")
}

/// `Z_0 + Z_5 + Z_6` (marked), the start of the derivation producing `Y`.
pub fn y_ex_start() -> Hypergraph {
    z_sum(&[0, 5, 6], true)
}

/// Pairs fusing `Z_0`'s `A` with `Z_5`'s `Ā` and `Z_0`'s `C` with `Z_6`'s `C̄`.
pub fn y_ex_pairs() -> FusionPairSet {
    FusionPairSet::new([
        ("Z0.A".into(), "Z5.A_bar".into()),
        ("Z0.C".into(), "Z6.C_bar".into()),
    ])
}

/// `Y`: the connected marked hypergraph derived from `y_ex_start`.
pub fn y_ex() -> Hypergraph {
    crate::fusion::apply_parallel_fusion(&y_ex_start(), &y_ex_pairs()).expect("valid pairs")
}

/// `rem_{b,c}(Y)`.
pub fn h_ex3() -> Hypergraph {
    crate::hypergraph::remove_labels_where(&y_ex(), |l| {
        matches!(l.kind(), LabelKind::Marker | LabelKind::Connector)
    })
}

/// `Z_0 + Z_3 + Z_4` (markerless).
pub fn p_ex_host() -> Hypergraph {
    z_sum(&[0, 3, 4], false)
}

/// The three pairs fusing `Z_0 + Z_3 + Z_4` into an `a`-loop and a vertex.
pub fn p_ex() -> FusionPairSet {
    FusionPairSet::new([
        ("Z0.A".into(), "Z3.A_bar".into()),
        ("Z3.B".into(), "Z4.B_bar".into()),
        ("Z0.C".into(), "Z4.C_bar".into()),
    ])
}

/// `(Z_0 + Z_1 + Z_2, {A, B, C}, {a})`.
pub fn counterexample() -> FusionGrammar {
    FusionGrammar::markerless(ex_alphabet(), z_sum(&[0, 1, 2], false)).expect("valid grammar")
}

/// The counterexample with `Z_0`'s `A`-edge reversed.
pub fn counterexample_reversed() -> FusionGrammar {
    let (fa, _) = fusion_a();
    let z0 = Hypergraph::builder()
        .edge("Z0.a", a(), &["Z0.L", "Z0.R"])
        .edge("Z0.A", fa, &["Z0.O", "Z0.L"])
        .edge("Z0.C", fusion_c().0, &["Z0.R", "Z0.O"])
        .build()
        .expect("valid");
    let start =
        merge_disjoint(&[z0, z_component(1, false), z_component(2, false)]).expect("disjoint");
    FusionGrammar::markerless(ex_alphabet(), start).expect("valid grammar")
}

/// Unary marker `mu`.
pub fn mu() -> Label {
    Label::marker("mu", 1)
}

/// `C1` = `mu`-edge and `A`-loop on one vertex; `C2` = `Ā`-loop and `a`-loop
/// on one vertex.
pub fn loop_fg() -> FusionGrammar {
    let (fa, fa_bar) = fusion_a();
    let alphabet = LabelAlphabet::new([a(), fa.clone(), fa_bar.clone(), mu()]).expect("valid");
    let start = Hypergraph::builder()
        .edge("C1.mu", mu(), &["C1.x"])
        .edge("C1.A", fa, &["C1.x", "C1.x"])
        .edge("C2.A_bar", fa_bar, &["C2.y", "C2.y"])
        .edge("C2.a", a(), &["C2.y", "C2.y"])
        .build()
        .expect("valid");
    FusionGrammar::full(alphabet, start).expect("valid grammar")
}

/// Target with an `a`-loop, a `b`-edge and a ternary `c`-edge; edge ids
/// sort as `e1 < e2 < e3`.
pub fn mem2_target() -> Hypergraph {
    Hypergraph::builder()
        .edge("e1", a(), &["x", "x"])
        .edge("e2", b(), &["x", "y"])
        .edge("e3", c(), &["p", "q", "y"])
        .build()
        .expect("valid")
}
