use fusegraph::fixtures::*;
use fusegraph::fusion::{oracle_search, FusionGrammar, SearchBounds};
use fusegraph::hypergraph::{
    connected_components, is_isomorphic, Hypergraph, Label, LabelAlphabet,
};
use fusegraph::nonempty::*;

fn a0() -> Label {
    Label::terminal("a0", 1)
}

/// Removes one isomorphic copy of each expected graph; true iff all match.
fn same_components(actual: &[Hypergraph], expected: &[Hypergraph]) -> bool {
    let mut left: Vec<&Hypergraph> = actual.iter().collect();
    for e in expected {
        match left.iter().position(|a| is_isomorphic(a, e)) {
            Some(i) => {
                left.remove(i);
            }
            None => return false,
        }
    }
    left.is_empty()
}

#[test]
fn squeeze_on_the_start_components() {
    let (fa, _) = fusion_a();
    let (fc, _) = fusion_c();
    let s0 = squeeze(&z_component(0, true));
    let expected = Hypergraph::builder()
        .edge("a", a(), &["b", "b"])
        .edge("A", fa, &["b", "o"])
        .edge("C", fc, &["b", "o"])
        .build()
        .unwrap();
    assert!(is_isomorphic(&s0, &expected));
    for i in 1..=4 {
        assert_eq!(squeeze(&z_component(i, true)), z_component(i, true));
    }
    let s5 = squeeze(&z_component(5, true));
    assert_eq!(s5.vertex_count(), 1);
    assert_eq!(s5.edge_count(), 4);
    let s6 = squeeze(&z_component(6, true));
    assert_eq!(s6.vertex_count(), 1);
}

#[test]
fn designated_sum_of_the_marked_component() {
    let s5 = squeeze(&z_component(5, true));
    let d = designated_sum(&s5, &a0());
    let comps = connected_components(&d);
    assert_eq!(comps.len(), 3);
    let with_a0: Vec<_> = comps
        .iter()
        .filter(|c| c.count_where(|l| *l == a0()) == 1)
        .collect();
    assert_eq!(with_a0.len(), 2);
    for c in with_a0 {
        assert_eq!(c.count_where(|l| *l == b_marker()), 1);
        assert_eq!(c.edge_count(), 4);
    }
    for i in [0, 1, 2, 3, 4, 6] {
        let s = squeeze(&z_component(i, true));
        assert!(is_isomorphic(&designated_sum(&s, &a0()), &s));
    }
}

#[test]
fn designate_rejects_non_markers() {
    let s5 = squeeze(&z_component(5, true));
    assert_eq!(
        designate(&s5, &"Z5.A_bar".into(), &a0()).unwrap(),
        Hypergraph::empty()
    );
    let z5 = z_component(5, true);
    assert_eq!(
        designate(&z5, &"Z5.b1".into(), &a0()).unwrap(),
        Hypergraph::empty()
    );
}

#[test]
fn xi_of_the_marked_example() {
    let red = build_ne_reduction(&fgp_ex()).unwrap();
    let (fa, fa_bar) = fusion_a();
    let (fc, fc_bar) = fusion_c();
    let a0 = red.a0.clone();
    let b = Hypergraph::builder;
    let expected = vec![
        b().edge("A", fa, &["l", "o"])
            .edge("C", fc, &["l", "o"])
            .build()
            .unwrap(),
        z_component(1, true),
        z_component(2, true),
        z_component(3, true),
        z_component(4, true),
        b().edge("x", fa_bar.clone(), &["v", "v"]).build().unwrap(),
        b().edge("x", fa_bar.clone(), &["v", "v"])
            .edge("y", a0.clone(), &["v"])
            .build()
            .unwrap(),
        b().edge("x", fa_bar, &["v", "v"])
            .edge("y", a0, &["v"])
            .build()
            .unwrap(),
        b().edge("x", fc_bar, &["v", "v"]).build().unwrap(),
    ];
    let comps = red.grammar.components();
    assert_eq!(comps.len(), 9);
    assert!(same_components(comps, &expected));

    let designated: Vec<_> = red
        .origins
        .iter()
        .filter(|o| o.designated.is_some())
        .collect();
    assert_eq!(designated.len(), 2);
    assert!(designated.iter().all(|o| o.component == 5));
    assert_eq!(red.target.vertex_count(), 1);
}

#[test]
fn single_marked_vertex_gives_two_components() {
    let alphabet = LabelAlphabet::new([mu()]).unwrap();
    let start = Hypergraph::builder()
        .edge("m", mu(), &["x"])
        .build()
        .unwrap();
    let g = FusionGrammar::full(alphabet.clone(), start).unwrap();
    let red = build_ne_reduction(&g).unwrap();
    assert_eq!(red.grammar.components().len(), 2);
    assert_eq!(red.grammar.start().vertex_count(), 2);
    assert!(decide_nonempty(&g).unwrap());

    let empty = FusionGrammar::full(alphabet, Hypergraph::empty()).unwrap();
    let red = build_ne_reduction(&empty).unwrap();
    assert_eq!(red.grammar.start().vertex_count(), 0);
    assert!(!decide_nonempty(&empty).unwrap());
}

#[test]
fn worked_nonemptiness_answers() {
    let ans = decide_nonempty_with(&fgp_ex(), &Default::default()).unwrap();
    assert!(ans.nonempty);
    let cert = ans.mem1.certificate.as_ref().unwrap();
    cert.replay(&ans.reduction.instance()).unwrap();

    assert!(decide_nonempty(&counterexample()).unwrap());
    assert!(!decide_nonempty(&counterexample_reversed()).unwrap());
    assert!(decide_nonempty(&loop_fg()).unwrap());
}

#[test]
fn counterexample_answers_match_the_oracle() {
    assert!(!oracle_search(&counterexample(), SearchBounds::new(3, 2)).is_empty());
    assert!(oracle_search(&counterexample_reversed(), SearchBounds::new(4, 4)).is_empty());
}
