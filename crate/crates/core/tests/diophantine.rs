mod common;

use common::*;
use fusegraph::diophantine::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn counterexample_columns() -> Vec<Vec<i64>> {
    vec![vec![1, 0, 1], vec![-1, 1, 0], vec![0, 1, -1]]
}

#[test]
fn counterexample_has_only_the_zero_solution() {
    let s = LinearSystem::from_columns(counterexample_columns(), vec![0, 0, 0]).unwrap();
    assert_eq!(homogeneous_nonzero(&s).unwrap(), None);
    assert_eq!(solve_nonneg(&s).unwrap(), Some(vec![0, 0, 0]));
}

#[test]
fn small_arithmetic() {
    let s = LinearSystem::new(vec![vec![2]], vec![4]).unwrap();
    assert_eq!(solve_nonneg(&s).unwrap(), Some(vec![2]));
    let s = LinearSystem::new(vec![vec![1, -1], vec![1, 1]], vec![1, 3]).unwrap();
    assert_eq!(solve_nonneg(&s).unwrap(), Some(vec![2, 1]));
    let s = LinearSystem::new(vec![vec![2]], vec![3]).unwrap();
    assert_eq!(solve_nonneg(&s).unwrap(), None);
}

#[test]
fn homogeneous_cases() {
    let s = LinearSystem::from_columns(vec![vec![0, 0]], vec![0, 0]).unwrap();
    assert_eq!(homogeneous_nonzero(&s).unwrap(), Some(vec![1]));
    let s = LinearSystem::from_columns(vec![vec![1], vec![-1]], vec![0]).unwrap();
    assert_eq!(homogeneous_nonzero(&s).unwrap(), Some(vec![1, 1]));
    let s = LinearSystem::from_columns(vec![vec![1]], vec![2]).unwrap();
    assert_eq!(
        homogeneous_nonzero(&s),
        Err(DiophantineError::NotHomogeneous)
    );
}

#[test]
fn dimension_errors() {
    assert!(matches!(
        LinearSystem::new(vec![vec![1, 2], vec![1]], vec![0, 0]),
        Err(DiophantineError::DimensionMismatch { .. })
    ));
    assert!(matches!(
        LinearSystem::from_columns(vec![vec![1, 2]], vec![0]),
        Err(DiophantineError::DimensionMismatch { .. })
    ));
    let ls = LinearSet::new(vec![0, 0], vec![vec![1, 1]]).unwrap();
    assert!(linear_set_member(&[1], &ls).is_err());
}

#[test]
fn linear_set_cases() {
    let ls = LinearSet::new(vec![0, 0], vec![vec![1, 1]]).unwrap();
    assert!(linear_set_member(&[3, 3], &ls).unwrap());
    assert!(!linear_set_member(&[2, 3], &ls).unwrap());
    let based = LinearSet::new(vec![4, 1], vec![vec![2, 0], vec![0, 3]]).unwrap();
    assert!(linear_set_member(&[4, 1], &based).unwrap());
    let bare = LinearSet::new(vec![2, 5], vec![]).unwrap();
    assert!(linear_set_member(&[2, 5], &bare).unwrap());
    assert!(!linear_set_member(&[2, 4], &bare).unwrap());
}

#[test]
fn large_entries_switch_to_big_integers() {
    let big = i64::MAX / 2;
    let s = LinearSystem::new(vec![vec![big, -big, 1]], vec![big]).unwrap();
    let x = solve_nonneg(&s).unwrap().unwrap();
    assert!(s.satisfied_by(&x));
}

#[test]
fn node_cap_is_reported() {
    let s = LinearSystem::new(vec![vec![7, -5, 3], vec![2, 3, -11]], vec![1, 1]).unwrap();
    assert!(matches!(
        solve_nonneg_with(&s, SolverLimits { max_nodes: 3 }),
        Err(DiophantineError::ResourceLimit { .. })
    ));
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

fn random_system(rng: &mut impl Rng) -> LinearSystem {
    let m = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=4);
    let matrix = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let rhs = (0..m).map(|_| rng.gen_range(-6..=6)).collect();
    LinearSystem::new(matrix, rhs).unwrap()
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn solver_agrees_with_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_system(&mut rng);
        let solved = solve_nonneg(&s).unwrap();
        if let Some(x) = &solved {
            prop_assert!(s.satisfied_by(x));
        }
        if brute(&s, 6).is_some() {
            prop_assert!(solved.is_some());
        }
    }

    #[test]
    fn homogeneous_solutions_are_nonzero_and_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_system(&mut rng);
        let h = LinearSystem::from_columns(s.columns().to_vec(), vec![0; s.rows()]).unwrap();
        let found = homogeneous_nonzero(&h).unwrap();
        if let Some(x) = &found {
            prop_assert!(x.iter().any(|&k| k > 0) && h.satisfied_by(x));
        }
        let mut nonzero_in_box = false;
        let n = h.cols();
        let mut x = vec![0u64; n];
        'outer: loop {
            let mut i = 0;
            loop {
                if i == n { break 'outer; }
                if x[i] < 4 { x[i] += 1; break; }
                x[i] = 0;
                i += 1;
            }
            if h.satisfied_by(&x) { nonzero_in_box = true; break; }
        }
        if nonzero_in_box {
            prop_assert!(found.is_some());
        }
    }

    #[test]
    fn linear_set_membership_agrees_with_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(1..=3);
        let base: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..=2)).collect();
        let periods: Vec<Vec<u64>> = (0..rng.gen_range(0..=3))
            .map(|_| (0..dim).map(|_| rng.gen_range(0..=2)).collect())
            .collect();
        let ls = LinearSet::new(base.clone(), periods.clone()).unwrap();
        let mut members = std::collections::BTreeSet::new();
        let k = periods.len();
        let mut coeff = vec![0u64; k];
        loop {
            let v: Vec<u64> = (0..dim).map(|d| base[d] + (0..k).map(|p| coeff[p] * periods[p][d]).sum::<u64>()).collect();
            members.insert(v);
            let mut i = 0;
            loop {
                if i == k { break; }
                if coeff[i] < 6 { coeff[i] += 1; break; }
                coeff[i] = 0;
                i += 1;
            }
            if i == k { break; }
        }
        let v: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..=6)).collect();
        prop_assert_eq!(linear_set_member(&v, &ls).unwrap(), members.contains(&v));
    }
}
