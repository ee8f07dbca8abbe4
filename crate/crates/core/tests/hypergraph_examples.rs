mod common;

use std::collections::BTreeSet;

use common::*;
use fusegraph::fixtures::*;
use fusegraph::hypergraph::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn start_hypergraph_has_seven_components() {
    let parts: Vec<Hypergraph> = (0..7).map(|i| z_component(i, false)).collect();
    let z = sum(&parts);
    assert_eq!(connected_components(&z).len(), 7);
    assert_eq!(connected_components(&z_ex(false)).len(), 7);
    assert!(is_isomorphic(&z, &z_ex(false)));
    assert!(connected_components(&Hypergraph::<Label>::empty()).is_empty());
}

#[test]
fn union_with_empty_is_identity() {
    let h = z_component(5, false);
    assert!(is_isomorphic(&disjoint_union(&h, &Hypergraph::empty()), &h));
    let u = disjoint_union(&h, &h_ex2());
    assert_eq!(u.size(), h.size() + h_ex2().size());
    assert!(u.has_vertex(&"0.Z5.L".into()) && u.has_vertex(&"1.u1".into()));
}

#[test]
fn multiplication_cases() {
    let z = z_ex(false);
    assert!(multiply(&z, &Multiplicity::new(vec![0; 7]))
        .unwrap()
        .is_empty());
    let mut counts = vec![0; 7];
    counts[0] = 2;
    let two = multiply(&z, &Multiplicity::new(counts)).unwrap();
    let comps = connected_components(&two);
    assert_eq!(comps.len(), 2);
    assert!(comps
        .iter()
        .all(|c| is_isomorphic(c, &z_component(0, false))));
    assert!(is_isomorphic(
        &multiply(&z, &Multiplicity::ones(7)).unwrap(),
        &z
    ));
    assert!(matches!(
        multiply(&z, &Multiplicity::new(vec![1; 3])),
        Err(HypergraphError::MultiplicityDomain {
            expected: 7,
            found: 3
        })
    ));
}

#[test]
fn quotient_cases() {
    let h = h_ex2();
    let p = VertexPartition::from_pairs(h.vertices().iter().cloned(), [("u1".into(), "u2".into())])
        .unwrap();
    let q = quotient(&h, &p).unwrap();
    assert!(is_isomorphic(&q, &h_ex1()));
    assert_eq!(q.vertices(), [VertexId::from("u1")]);

    let z1 = z_component(1, false);
    assert_eq!(
        quotient(
            &z1,
            &VertexPartition::identity(z1.vertices().iter().cloned())
        )
        .unwrap(),
        z1
    );
    let all = VertexPartition::from_classes([z1.vertices().to_vec()]).unwrap();
    let one = quotient(&z1, &all).unwrap();
    assert_eq!(one.vertex_count(), 1);
    assert!(one.edges().iter().all(|e| e.att[0] == e.att[1]));
}

#[test]
fn subtraction_cases() {
    let z0 = z_component(0, false);
    let out = subtract(&z0, &BTreeSet::new(), &BTreeSet::from(["Z0.A".into()])).unwrap();
    assert_eq!(out.vertex_count(), 3);
    let ids: Vec<&str> = out.edges().iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids, ["Z0.C", "Z0.a"]);
    assert_eq!(
        subtract(&z0, &BTreeSet::new(), &BTreeSet::new()).unwrap(),
        z0
    );
    assert!(matches!(
        subtract(&z0, &BTreeSet::from(["Z0.O".into()]), &BTreeSet::new()),
        Err(HypergraphError::DanglingAttachment { .. })
    ));
}

#[test]
fn label_removal_cases() {
    let h3 = h_ex3();
    assert_eq!(h3.vertex_count(), 7);
    assert_eq!(h3.count_label(&a()), 2);
    let comps = connected_components(&h3);
    assert_eq!(comps.len(), 6);
    assert_eq!(
        comps
            .iter()
            .filter(|c| c.edge_count() == 0 && c.vertex_count() == 1)
            .count(),
        4
    );

    let y = y_ex();
    assert_eq!(
        remove_labels(&y, &BTreeSet::from([b_marker(), c_connector()])),
        h3
    );
    assert_eq!(remove_labels(&y, &BTreeSet::new()), y);
    let all: BTreeSet<Label> = y.labels().into_iter().cloned().collect();
    let bare = remove_labels(&y, &all);
    assert_eq!(
        (bare.edge_count(), bare.vertex_count()),
        (0, y.vertex_count())
    );
}

#[test]
fn isomorphism_cases() {
    assert!(!is_isomorphic(&h_ex1(), &h_ex2()));
    let z1 = z_component(1, false);
    assert!(is_isomorphic(&z1, &rename_all(&z1)));
    assert!(!is_isomorphic(&z1, &z_component(2, false)));
    let iso = find_isomorphism(&z1, &rename_all(&z1)).unwrap();
    assert_eq!(iso.vertices.len(), 3);
}

#[test]
fn label_counts() {
    assert_eq!(h_ex2().count_label(&a()), 1);
    assert_eq!(z_component(2, false).count_label(&fusion_b().0), 1);
    assert_eq!(Hypergraph::<Label>::empty().count_label(&mu()), 0);
}

#[test]
fn alphabet_validation() {
    let bad = LabelAlphabet::new([
        Label::new("A", 2, LabelKind::Fusion, Some("A_bar")),
        Label::new("A_bar", 3, LabelKind::Complement, Some("A")),
    ]);
    let err = bad.unwrap_err();
    assert!(err
        .issues
        .iter()
        .any(|i| matches!(i.kind, AlphabetIssueKind::ArityMismatch { .. })));
    let missing =
        LabelAlphabet::new([Label::new("A", 2, LabelKind::Fusion, Some("A_bar"))]).unwrap_err();
    assert!(!missing.issues.is_empty());
    assert_eq!(ex_alphabet().terminals().count(), 3);
    assert_eq!(exp_alphabet().markers().count(), 1);
    assert_eq!(exp_alphabet().connectors().count(), 1);
}

#[test]
fn attachment_arity_is_checked() {
    let r = Hypergraph::new(vec!["u".into()], vec![Edge::new("e", a(), ["u".into()])]);
    assert!(matches!(r, Err(HypergraphError::ArityMismatch { .. })));
    let r = Hypergraph::new(
        vec!["u".into()],
        vec![Edge::new("e", a(), ["u".into(), "w".into()])],
    );
    assert!(matches!(r, Err(HypergraphError::UnknownAttachment { .. })));
}

/// Brute-force isomorphism oracle: try every vertex bijection and compare
/// the mapped edge multisets.
fn brute_isomorphic(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    if h1.vertex_count() != h2.vertex_count() || h1.edge_count() != h2.edge_count() {
        return false;
    }
    let n = h1.vertex_count();
    let mut target: Vec<(Label, Vec<usize>)> = h2
        .edges()
        .iter()
        .map(|e| {
            (
                e.label.clone(),
                e.att.iter().map(|v| h2.vertex_index(v).unwrap()).collect(),
            )
        })
        .collect();
    target.sort();
    let mut perm: Vec<usize> = (0..n).collect();
    let src: Vec<(Label, Vec<usize>)> = h1
        .edges()
        .iter()
        .map(|e| {
            (
                e.label.clone(),
                e.att.iter().map(|v| h1.vertex_index(v).unwrap()).collect(),
            )
        })
        .collect();
    loop {
        let mut mapped: Vec<(Label, Vec<usize>)> = src
            .iter()
            .map(|(l, att)| (l.clone(), att.iter().map(|&v| perm[v]).collect()))
            .collect();
        mapped.sort();
        if mapped == target {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A random hypergraph and a random relabelled variant that is isomorphic
/// half of the time.
fn iso_pair(seed: u64) -> (Hypergraph, Hypergraph) {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_hypergraph(&mut rng, 5, 5);
    if rng.gen_bool(0.5) {
        let mut names: Vec<usize> = (0..h.vertex_count()).collect();
        names.shuffle(&mut rng);
        let map: std::collections::BTreeMap<VertexId, VertexId> = h
            .vertices()
            .iter()
            .zip(&names)
            .map(|(v, i)| (v.clone(), VertexId::new(format!("w{i}"))))
            .collect();
        (
            h.clone(),
            h.rename(|v| map[v].clone(), |e| EdgeId::new(format!("f.{e}")))
                .unwrap(),
        )
    } else {
        (h, random_hypergraph(&mut rng, 5, 5))
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn isomorphism_agrees_with_brute_force(seed in any::<u64>()) {
        let (h1, h2) = iso_pair(seed);
        prop_assert_eq!(is_isomorphic(&h1, &h2), brute_isomorphic(&h1, &h2));
        if let Some(iso) = find_isomorphism(&h1, &h2) {
            for e in h1.edges() {
                let f = h2.edge(&iso.edges[&e.id]).unwrap();
                prop_assert_eq!(&f.label, &e.label);
                let mapped: Vec<VertexId> = e.att.iter().map(|v| iso.vertices[v].clone()).collect();
                prop_assert_eq!(&f.att, &mapped);
            }
        }
    }

    #[test]
    fn edge_bijection_fast_path_agrees(seed in any::<u64>()) {
        let (h1, h2) = iso_pair(seed);
        let strip = |h: &Hypergraph| {
            let iso: BTreeSet<VertexId> = h.isolated_vertices().into_iter().cloned().collect();
            subtract(h, &iso, &BTreeSet::new()).unwrap()
        };
        let (h1, h2) = (strip(&h1), strip(&h2));
        prop_assert_eq!(edge_bijection_isomorphic(&h1, &h2), is_isomorphic(&h1, &h2));
    }

    #[test]
    fn isomorphism_is_an_equivalence(seed in any::<u64>()) {
        let (h1, h2) = iso_pair(seed);
        let h3 = rename_all(&h2);
        prop_assert!(is_isomorphic(&h1, &h1));
        prop_assert_eq!(is_isomorphic(&h1, &h2), is_isomorphic(&h2, &h1));
        if is_isomorphic(&h1, &h2) {
            prop_assert!(is_isomorphic(&h1, &h3));
        }
    }

    #[test]
    fn union_sizes_and_counts_add_up(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = random_hypergraph(&mut rng, 5, 5);
        let h2 = random_hypergraph(&mut rng, 5, 5);
        let u = disjoint_union(&h1, &h2);
        prop_assert_eq!(u.size(), h1.size() + h2.size());
        for l in pool() {
            prop_assert_eq!(u.count_label(&l), h1.count_label(&l) + h2.count_label(&l));
        }
        prop_assert!(is_isomorphic(&u, &disjoint_union(&h2, &h1)));
    }

    #[test]
    fn quotients_compose_by_join(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hypergraph(&mut rng, 6, 5);
        let vs = h.vertices().to_vec();
        let mut pick = || {
            let pairs: Vec<(VertexId, VertexId)> = (0..2)
                .map(|_| (vs.choose(&mut rng).unwrap().clone(), vs.choose(&mut rng).unwrap().clone()))
                .collect();
            VertexPartition::from_pairs(vs.iter().cloned(), pairs).unwrap()
        };
        let (p1, p2) = (pick(), pick());
        let once = quotient(&h, &p1).unwrap();
        let p2_on_quotient = VertexPartition::from_pairs(
            once.vertices().iter().cloned(),
            p2.classes().into_iter().flat_map(|c| {
                let reps: Vec<VertexId> = c.iter().map(|v| p1.representative(v).unwrap().clone()).collect();
                reps.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect::<Vec<_>>()
            }),
        )
        .unwrap();
        let twice = quotient(&once, &p2_on_quotient).unwrap();
        let joined = quotient(&h, &p1.join(&p2)).unwrap();
        prop_assert!(is_isomorphic(&twice, &joined));
        prop_assert!(is_isomorphic(&quotient(&h, &VertexPartition::identity(vs.iter().cloned())).unwrap(), &h));
    }

    #[test]
    fn remove_labels_is_subtraction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hypergraph(&mut rng, 5, 6);
        let r: BTreeSet<Label> = [t2(), f1().0].into_iter().collect();
        let es: BTreeSet<EdgeId> = h.edges().iter().filter(|e| r.contains(&e.label)).map(|e| e.id.clone()).collect();
        prop_assert_eq!(remove_labels(&h, &r), subtract(&h, &BTreeSet::new(), &es).unwrap());
    }
}
