//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::*;
use fusegraph::diophantine::{homogeneous_nonzero, solve_nonneg, LinearSystem};
use fusegraph::fixtures::*;
use fusegraph::fusion::{
    apply_fusion, apply_parallel_fusion, evidence_path, oracle_membership, oracle_search,
    FusionPairSet, SearchBounds,
};
use fusegraph::hypergraph::{
    connected_components, is_isomorphic, multiply, Hypergraph, Label, Multiplicity,
};
use fusegraph::membership::{
    decide_mem, decide_mem1, decide_mem_bounded, Affine, BoundedFusionGrammar, Mem1Instance,
};
use fusegraph::nonempty::{build_ne_reduction, decide_nonempty, designated_sum, squeeze};
use fusegraph::parikh::{
    decide_parikh_membership, linearize, psi, realizable, word_parikh, ContextFreeGrammar,
    Coordinates, Nonterminal, ParikhOptions, Production, ProductionMultiset,
};
use rand::seq::SliceRandom;
use rand::Rng;

const EXAMPLE_LIMIT: Duration = Duration::from_secs(10);
const STRUCTURE_LIMIT: Duration = Duration::from_secs(1);
const CROSS_CHECK_LIMIT: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

type Check = (&'static str, Box<dyn Fn() -> bool>);

/// Runs named exact checks, each under `limit`.
fn exact_checks(checks: Vec<Check>, limit: Duration) -> Outcome {
    let mut failed = Vec::new();
    let mut slowest = Duration::ZERO;
    let n = checks.len();
    for (name, check) in checks {
        let (ok, t) = timed(check);
        slowest = slowest.max(t);
        if !ok || t > limit {
            failed.push(format!(
                "{name} ({}, {:.2?})",
                if ok { "slow" } else { "wrong" },
                t
            ));
        }
    }
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{n}/{n} exact, slowest {slowest:.2?} (limit {limit:?})")
        } else {
            format!("failed: {}", failed.join(", "))
        },
    }
}

fn worked_examples() -> Outcome {
    let inst = |g, h| Mem1Instance::new(g, h).unwrap();
    exact_checks(
        vec![
            (
                "mem(FG, H1)",
                Box::new(|| decide_mem(&fg_ex(), &h_ex1()).unwrap()),
            ),
            (
                "mem(FG, H2)",
                Box::new(|| decide_mem(&fg_ex(), &h_ex2()).unwrap()),
            ),
            (
                "mem1(counterexample, H2)",
                Box::new(move || {
                    decide_mem1(&inst(counterexample(), h_ex2()))
                        .unwrap()
                        .member
                }),
            ),
            (
                "mem1(reversed counterexample, H2) = false",
                Box::new(move || {
                    !decide_mem1(&inst(counterexample_reversed(), h_ex2()))
                        .unwrap()
                        .member
                }),
            ),
            (
                "nonempty(FGP)",
                Box::new(|| decide_nonempty(&fgp_ex()).unwrap()),
            ),
            (
                "mem_bounded(FGP, id, id, H3)",
                Box::new(|| {
                    let bg =
                        BoundedFusionGrammar::new(fgp_ex(), Affine::identity(), Affine::identity());
                    decide_mem_bounded(&bg, &h_ex3()).unwrap()
                }),
            ),
        ],
        EXAMPLE_LIMIT,
    )
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

fn xi_matches_the_figure() -> bool {
    let red = build_ne_reduction(&fgp_ex()).unwrap();
    let (fa, fa_bar) = fusion_a();
    let (fc, fc_bar) = fusion_c();
    let a0 = red.a0.clone();
    let b = Hypergraph::builder;
    let loop_with = |extra: Option<&Label>| {
        let mut bld = b().edge("x", fa_bar.clone(), &["v", "v"]);
        if let Some(l) = extra {
            bld = bld.edge("y", l.clone(), &["v"]);
        }
        bld.build().unwrap()
    };
    let expected = vec![
        b().edge("A", fa, &["l", "o"])
            .edge("C", fc, &["l", "o"])
            .build()
            .unwrap(),
        z_component(1, true),
        z_component(2, true),
        z_component(3, true),
        z_component(4, true),
        loop_with(None),
        loop_with(Some(&a0)),
        loop_with(Some(&a0)),
        b().edge("x", fc_bar, &["v", "v"]).build().unwrap(),
    ];
    red.grammar.components().len() == 9 && same_components(red.grammar.components(), &expected)
}

fn structural_fixtures() -> Outcome {
    exact_checks(
        vec![
            (
                "Xi(FGP) has 9 components as drawn",
                Box::new(xi_matches_the_figure),
            ),
            (
                "Dsg(sqz(Z5)) has 3 components",
                Box::new(|| {
                    let d =
                        designated_sum(&squeeze(&z_component(5, true)), &Label::terminal("a0", 1));
                    connected_components(&d).len() == 3
                }),
            ),
            (
                "sqz(Z1) = Z1",
                Box::new(|| squeeze(&z_component(1, true)) == z_component(1, true)),
            ),
            (
                "C(H3) has 6 components, 4 isolated vertices",
                Box::new(|| {
                    let h = h_ex3();
                    connected_components(&h).len() == 6 && h.isolated_vertices().len() == 4
                }),
            ),
        ],
        STRUCTURE_LIMIT,
    )
}

fn instance(stream: u64) -> (Hypergraph, FusionPairSet, rand_chacha::ChaCha8Rng) {
    let mut r = rng(stream);
    let h = random_hypergraph(&mut r, 6, 7);
    let p = random_pairs(&mut r, &h);
    (h, p, r)
}

/// `≡_P` by closure of the positionwise relation over a boolean matrix.
fn equivalence_matrix(h: &Hypergraph, p: &FusionPairSet) -> Vec<Vec<bool>> {
    let n = h.vertex_count();
    let ix = |v| h.vertex_index(v).unwrap();
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

fn evidence_paths() -> Outcome {
    let mut bad = 0;
    let mut pairs_checked = 0;
    for s in 0..200 {
        let (h, p, _) = instance(0xe71d + s);
        let m = equivalence_matrix(&h, &p);
        for (i, u) in h.vertices().iter().enumerate() {
            for (j, v) in h.vertices().iter().enumerate() {
                pairs_checked += 1;
                let path = evidence_path(&h, &p, u, v).unwrap();
                let ok = path.is_some() == m[i][j]
                    && path.is_none_or(|path| path.check(&h, &p, u, v).is_ok());
                bad += usize::from(!ok);
            }
        }
    }
    let (l, r) = ("Z0.L".into(), "Z0.R".into());
    let fixed = evidence_path(&p_ex_host(), &p_ex(), &l, &r)
        .unwrap()
        .is_some_and(|path| path.len() == 3 && path.check(&p_ex_host(), &p_ex(), &l, &r).is_ok());
    Outcome {
        pass: bad == 0 && fixed,
        detail: format!(
            "200 instances, {pairs_checked} vertex pairs, {bad} discrepancies; P^ex path of length 3: {fixed}"
        ),
    }
}

fn sequentialization() -> Outcome {
    let mut bad = 0;
    for s in 0..100 {
        let (h, p, mut r) = instance(0x5e9 + s);
        let parallel = apply_parallel_fusion(&h, &p).unwrap();
        for _ in 0..3 {
            let mut order = p.pairs().to_vec();
            order.shuffle(&mut r);
            let seq = order
                .iter()
                .fold(h.clone(), |acc, (a, b)| apply_fusion(&acc, a, b).unwrap());
            bad += usize::from(!is_isomorphic(&parallel, &seq));
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("100 instances x 3 orderings, {bad} non-isomorphic"),
    }
}

fn oracle_cross_validation() -> Outcome {
    let (mut missed, mut bad_certs, mut positives, mut found) = (0, 0, 0, 0);
    let (_, t) = timed(|| {
        for s in 0..200 {
            let mut r = rng(0xc5 + s);
            let g = random_grammar(&mut r);
            let h = random_single_edge_target(&mut r);
            let inst = Mem1Instance::new(g.clone(), h.clone()).unwrap();
            let ans = decide_mem1(&inst).unwrap();
            if let Some(c) = &ans.certificate {
                bad_certs += usize::from(c.replay(&inst).is_err());
            }
            let hit = oracle_membership(&g, &h, SearchBounds::new(4, 4)).is_found();
            missed += usize::from(hit && !ans.member);
            positives += usize::from(ans.member);
            found += usize::from(hit);
        }
    });
    Outcome {
        pass: missed == 0 && bad_certs == 0 && t < CROSS_CHECK_LIMIT,
        detail: format!(
            "200 grammars, oracle found {found}, decider yes {positives}; oracle-found but decider no: {missed}; certificates failing replay: {bad_certs}; {t:.1?} (limit {CROSS_CHECK_LIMIT:?})"
        ),
    }
}

fn ne_cross_validation() -> Outcome {
    let (mut missed, mut positives, mut found) = (0, 0, 0);
    let (_, t) = timed(|| {
        for s in 0..200 {
            let mut r = rng(0xc5 + s);
            let g = random_grammar(&mut r).lift_with_markers("mu").0;
            let decided = decide_nonempty(&g).unwrap();
            let hit = !oracle_search(&g, SearchBounds::new(4, 4)).is_empty();
            missed += usize::from(hit && !decided);
            positives += usize::from(decided);
            found += usize::from(hit);
        }
    });
    Outcome {
        pass: missed == 0 && t < CROSS_CHECK_LIMIT,
        detail: format!(
            "200 lifted grammars, oracle non-empty {found}, decider yes {positives}; oracle non-empty but decider no: {missed}; {t:.1?}"
        ),
    }
}

/// Brute force over the box `{0..=bound}ⁿ`.
fn brute(s: &LinearSystem, bound: u64) -> Option<Vec<u64>> {
    let n = s.cols();
    let mut x = vec![0u64; n];
    loop {
        if s.satisfied_by(&x) {
            return Some(x);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn diophantine() -> Outcome {
    let mut bad = 0;
    for s in 0..300 {
        let mut r = rng(0xd10 + s);
        let m = r.gen_range(1..=4);
        let n = r.gen_range(1..=4);
        let matrix = (0..m)
            .map(|_| (0..n).map(|_| r.gen_range(-3..=3)).collect())
            .collect();
        let rhs = (0..m).map(|_| r.gen_range(-6..=6)).collect();
        let sys = LinearSystem::new(matrix, rhs).unwrap();
        let solved = solve_nonneg(&sys).unwrap();
        let wrong = match (&solved, brute(&sys, 6)) {
            (Some(x), _) => !sys.satisfied_by(x),
            (None, b) => b.is_some(),
        };
        bad += usize::from(wrong);
    }
    let cx = LinearSystem::from_columns(
        vec![vec![1, 0, 1], vec![-1, 1, 0], vec![0, 1, -1]],
        vec![0, 0, 0],
    )
    .unwrap();
    let trivial_only = homogeneous_nonzero(&cx).unwrap().is_none();
    Outcome {
        pass: bad == 0 && trivial_only,
        detail: format!(
            "300 systems, {bad} disagreements with brute force; counterexample system has no nonzero solution: {trivial_only}"
        ),
    }
}

fn random_cfg(r: &mut impl Rng) -> ContextFreeGrammar {
    let coords = Coordinates::of(&alphabet().extended([mu()]).unwrap());
    let symbols = coords.labels().to_vec();
    let lhs: Vec<Nonterminal> = std::iter::once(Nonterminal::Start)
        .chain(
            symbols
                .iter()
                .filter(|l| l.kind().is_fusion_like())
                .map(|l| Nonterminal::Label(l.clone())),
        )
        .collect();
    let n = r.gen_range(1..=6);
    let productions = (0..n)
        .map(|i| Production {
            lhs: if i == 0 && r.gen_bool(0.7) {
                Nonterminal::Start
            } else {
                lhs.choose(r).unwrap().clone()
            },
            rhs: (0..r.gen_range(0..=4))
                .map(|_| symbols.choose(r).unwrap().clone())
                .collect(),
            origin: None,
        })
        .collect();
    ContextFreeGrammar::new(coords, productions).unwrap()
}

/// Production-count vectors of all derivations `S ⇒⁺ w` of at most `steps`
/// steps, searched over sentential forms kept as symbol counts.
fn derivable_multisets(cfg: &ContextFreeGrammar, steps: usize) -> HashSet<Vec<u64>> {
    use std::collections::BTreeMap;
    let np = cfg.productions().len();
    let mut frontier: HashSet<(BTreeMap<Nonterminal, u64>, Vec<u64>)> = HashSet::new();
    frontier.insert((BTreeMap::from([(Nonterminal::Start, 1)]), vec![0; np]));
    let mut out = HashSet::new();
    for _ in 0..steps {
        let mut next = HashSet::new();
        for (form, used) in &frontier {
            for (i, p) in cfg.productions().iter().enumerate() {
                if form.get(&p.lhs).copied().unwrap_or(0) == 0 {
                    continue;
                }
                let mut f = form.clone();
                *f.get_mut(&p.lhs).unwrap() -= 1;
                for l in p.rhs.iter().filter(|l| l.kind().is_fusion_like()) {
                    *f.entry(Nonterminal::Label(l.clone())).or_insert(0) += 1;
                }
                f.retain(|_, k| *k > 0);
                let mut u = used.clone();
                u[i] += 1;
                out.insert(u.clone());
                next.insert((f, u));
            }
        }
        frontier = next;
    }
    out
}

fn multisets_up_to(np: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..np {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                let used: u64 = v.iter().sum();
                (0..=total - used).map(move |k| {
                    let mut v = v.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().sum::<u64>() > 0);
    out
}

fn parikh() -> Outcome {
    let mut realizable_bad = 0;
    for s in 0..300 {
        let mut r = rng(0x9a71 + s);
        let cfg = random_cfg(&mut r);
        let found = derivable_multisets(&cfg, 6);
        for v in multisets_up_to(cfg.productions().len(), 6) {
            let m = ProductionMultiset(
                v.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (i, k))
                    .collect(),
            );
            realizable_bad += usize::from(realizable(&cfg, &m) != found.contains(&v));
        }
    }

    let opts = ParikhOptions::default();
    let loop_ok = [(1, true), (0, false), (2, false)]
        .iter()
        .all(|&(k, want)| {
            decide_parikh_membership(&loop_fg(), &[k], &opts)
                .map(|a| a.member == want)
                .unwrap_or(false)
        });

    let mut property_bad = 0;
    let coords = Coordinates::of(&alphabet());
    for s in 0..200 {
        let mut r = rng(0x5c2 + s);
        let h = random_hypergraph(&mut r, 5, 6);
        let p = random_pairs(&mut r, &h);
        let fused_first = squeeze(&apply_parallel_fusion(&h, &p).unwrap());
        let squeezed_first = apply_parallel_fusion(&squeeze(&h), &p).unwrap();
        let k = connected_components(&h).len();
        let m = Multiplicity::new((0..k).map(|_| r.gen_range(0..=2)).collect());
        let mult_ok = is_isomorphic(
            &squeeze(&multiply(&h, &m).unwrap()),
            &multiply(&squeeze(&h), &m).unwrap(),
        );
        let v = word_parikh(&linearize(&h, &coords).unwrap(), &coords).unwrap();
        let counts_ok = coords
            .labels()
            .iter()
            .enumerate()
            .all(|(i, l)| v.0[i] as usize == h.count_where(|x| x == l))
            && psi(&h, &coords).unwrap() == coords.project(&v);
        property_bad +=
            usize::from(!is_isomorphic(&fused_first, &squeezed_first) || !mult_ok || !counts_ok);
    }
    Outcome {
        pass: realizable_bad == 0 && loop_ok && property_bad == 0,
        detail: format!(
            "300 CFGs, {realizable_bad} realizability discrepancies; loop grammar (1)/(0)/(2) exact: {loop_ok}; 200 squeeze and count instances, {property_bad} failures"
        ),
    }
}

type Run = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Run); 8] = [
        ("worked examples", worked_examples),
        ("structural fixtures", structural_fixtures),
        ("evidence paths", evidence_paths),
        ("sequentialization", sequentialization),
        ("membership vs oracle", oracle_cross_validation),
        ("non-emptiness vs oracle", ne_cross_validation),
        ("diophantine solver", diophantine),
        ("parikh suite", parikh),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (o, t) = timed(run);
        failures += usize::from(!o.pass);
        println!(
            "[{}] {} {name}: {} [{t:.2?}]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
