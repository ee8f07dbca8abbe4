mod common;

use std::collections::BTreeSet;

use common::*;
use fusegraph::fusion::*;
use fusegraph::hypergraph::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> (Hypergraph, FusionPairSet, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_hypergraph(&mut rng, 6, 7);
    let p = random_pairs(&mut rng, &h);
    (h, p, rng)
}

/// Sequential fusion, one pair at a time; ids survive earlier fusions
/// because `quotient` keeps least ids and edges keep theirs.
fn sequential(h: &Hypergraph, order: &[(EdgeId, EdgeId)]) -> Hypergraph {
    order
        .iter()
        .fold(h.clone(), |acc, (a, b)| apply_fusion(&acc, a, b).unwrap())
}

/// Oracle for `≡_P`: closure of the positionwise relation by repeated
/// relaxation over a boolean matrix.
fn equivalence_matrix(h: &Hypergraph, p: &FusionPairSet) -> Vec<Vec<bool>> {
    let n = h.vertex_count();
    let ix = |v: &VertexId| h.vertex_index(v).unwrap();
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in p.pairs() {
        for (x, y) in h.edge(a).unwrap().att.iter().zip(&h.edge(b).unwrap().att) {
            m[ix(x)][ix(y)] = true;
            m[ix(y)][ix(x)] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn parallel_fusion_equals_every_sequential_order(seed in any::<u64>()) {
        let (h, p, mut rng) = instance(seed);
        let parallel = apply_parallel_fusion(&h, &p).unwrap();
        for _ in 0..3 {
            let mut order = p.pairs().to_vec();
            order.shuffle(&mut rng);
            prop_assert!(is_isomorphic(&parallel, &sequential(&h, &order)));
        }
    }

    #[test]
    fn identification_classes_match_the_closure(seed in any::<u64>()) {
        let (h, p, _) = instance(seed);
        let classes = identification_classes(&h, &p).unwrap();
        let m = equivalence_matrix(&h, &p);
        for (i, u) in h.vertices().iter().enumerate() {
            for (j, v) in h.vertices().iter().enumerate() {
                prop_assert_eq!(classes.same_class(u, v), m[i][j]);
            }
        }
        let rest = subtract(&h, &BTreeSet::new(), &p.edges()).unwrap();
        prop_assert_eq!(quotient(&rest, &classes).unwrap(), apply_parallel_fusion(&h, &p).unwrap());
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn evidence_paths_exist_exactly_for_identified_vertices(seed in any::<u64>()) {
        let (h, p, _) = instance(seed);
        let m = equivalence_matrix(&h, &p);
        for (i, u) in h.vertices().iter().enumerate() {
            for (j, v) in h.vertices().iter().enumerate() {
                let path = evidence_path(&h, &p, u, v).unwrap();
                prop_assert_eq!(path.is_some(), m[i][j]);
                if let Some(path) = path {
                    prop_assert_eq!(path.check(&h, &p, u, v), Ok(()));
                }
            }
        }
    }

    #[test]
    fn connected_results_have_connected_nets(seed in any::<u64>()) {
        let (h, p, _) = instance(seed);
        if is_connected(&apply_parallel_fusion(&h, &p).unwrap()) {
            prop_assert!(fusion_net(&h, &p).unwrap().is_connected());
        }
    }
}

/// A state of an interleaved derivation: components with the number of
/// start-component instances each descends from.
type Weighted = Vec<(Hypergraph, usize)>;

fn fuse_in(state: &Weighted, i: usize, j: usize, e: &EdgeId, f: &EdgeId) -> Weighted {
    let host = if i == j {
        state[i].0.clone()
    } else {
        sum([&state[i].0, &state[j].0])
    };
    let (e, f) = if i == j {
        (e.clone(), f.clone())
    } else {
        (e.tagged(0), f.tagged(1))
    };
    let w = if i == j {
        state[i].1
    } else {
        state[i].1 + state[j].1
    };
    let fused = apply_fusion(&host, &e, &f).unwrap();
    let mut next: Weighted = state
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i && *k != j)
        .map(|(_, c)| c.clone())
        .collect();
    next.extend(connected_components(&fused).into_iter().map(|c| (c, w)));
    next
}

/// Every successor by one duplication, one deletion or one single fusion.
fn successors(state: &Weighted, max_weight: usize) -> Vec<Weighted> {
    let mut out = Vec::new();
    for i in 0..state.len() {
        let mut dup = state.clone();
        dup.push(state[i].clone());
        out.push(dup);
        let mut del = state.clone();
        del.remove(i);
        out.push(del);
    }
    for i in 0..state.len() {
        for j in 0..state.len() {
            for e in state[i]
                .0
                .edges()
                .iter()
                .filter(|e| e.label.kind() == LabelKind::Fusion)
            {
                for f in state[j]
                    .0
                    .edges()
                    .iter()
                    .filter(|f| e.label.is_complement_of(&f.label))
                {
                    let w = if i == j {
                        state[i].1
                    } else {
                        state[i].1 + state[j].1
                    };
                    if w <= max_weight {
                        out.push(fuse_in(state, i, j, &e.id, &f.id));
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn interleaved_derivations_reduce_to_the_normal_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_grammar(&mut rng);
        let start: Weighted = g.components().iter().map(|c| (c.clone(), 1)).collect();
        let mut frontier = vec![start];
        let mut members: Vec<(Hypergraph, usize)> = Vec::new();
        for _ in 0..3 {
            let mut next = Vec::new();
            for s in &frontier {
                for t in successors(s, 3) {
                    if t.len() <= 5 {
                        next.push(t);
                    }
                }
            }
            next.truncate(400);
            for s in &next {
                for (c, w) in s {
                    if c.edges().iter().all(|e| e.label.kind() == LabelKind::Terminal) {
                        members.push((c.clone(), *w));
                    }
                }
            }
            frontier = next;
        }
        for (c, w) in members {
            let found = oracle_membership(&g, &c, SearchBounds::new(w, 3));
            prop_assert!(found.is_found(), "component {:?} (weight {}) missed", c, w);
        }
    }

    #[test]
    fn oracle_search_is_invariant_under_renaming(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_grammar(&mut rng);
        let renamed = g.with_start(rename_all(g.start())).unwrap();
        let b = SearchBounds::new(3, 3);
        let x = oracle_search(&g, b);
        let y = oracle_search(&renamed, b);
        prop_assert_eq!(x.len(), y.len());
        for h in &x {
            prop_assert!(y.iter().any(|k| is_isomorphic(h, k)));
        }
    }
}
