use std::collections::HashSet;

use num_bigint::BigInt;

use super::presolve::{presolve, Presolved};
use super::scalar::Scalar;
use super::system::{DiophantineError, LinearSet, LinearSystem};

/// Exploration cap for the completion search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SolverLimits {
    pub max_nodes: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_nodes: 2_000_000,
        }
    }
}

enum Abort {
    Overflow,
    Limit(usize),
}

/// Some `x ∈ ℕⁿ` with `Ax = b`, or `None` if there is none.
pub fn solve_nonneg(s: &LinearSystem) -> Result<Option<Vec<u64>>, DiophantineError> {
    solve_nonneg_with(s, SolverLimits::default())
}

pub fn solve_nonneg_with(
    s: &LinearSystem,
    limits: SolverLimits,
) -> Result<Option<Vec<u64>>, DiophantineError> {
    let (keep, columns, rhs) = match presolve(s) {
        Presolved::Infeasible => return Ok(None),
        Presolved::Reduced { keep, columns, rhs } => (keep, columns, rhs),
    };
    let expand = |y: Vec<u64>| {
        let mut x = vec![0; s.cols()];
        for (k, v) in keep.iter().zip(y) {
            x[*k] = v;
        }
        x
    };
    if rhs.iter().all(|&b| b == 0) {
        return Ok(Some(vec![0; s.cols()]));
    }
    let found = match complete::<i64>(&columns, &rhs, limits) {
        Err(Abort::Overflow) => complete::<BigInt>(&columns, &rhs, limits),
        other => other,
    };
    match found {
        Ok(y) => {
            let x = y.map(expand);
            debug_assert!(x.as_ref().is_none_or(|x| s.satisfied_by(x)));
            Ok(x)
        }
        Err(Abort::Limit(nodes)) => Err(DiophantineError::ResourceLimit { nodes }),
        Err(Abort::Overflow) => unreachable!("big integers do not overflow"),
    }
}

/// Completion search on `[A | −b]` with the last variable capped at 1.
///
/// Nodes `t` are extended by `e_j` only when `⟨A't, A'e_j⟩ < 0`; nodes
/// dominating a minimal homogeneous solution are cut. A zero defect with the
/// last coordinate 1 is a solution of `Ax = b`.
fn complete<N: Scalar>(
    columns: &[Vec<i64>],
    rhs: &[i64],
    limits: SolverLimits,
) -> Result<Option<Vec<u64>>, Abort> {
    let mut cols: Vec<Vec<N>> = columns
        .iter()
        .map(|c| c.iter().map(|&x| N::from_i64(x)).collect())
        .collect();
    cols.push(rhs.iter().map(|&b| N::from_i64(-b)).collect());
    let m = cols.len();
    let last = m - 1;

    let mut frontier: Vec<(Vec<u64>, Vec<N>)> = (0..m)
        .map(|j| {
            let mut t = vec![0; m];
            t[j] = 1;
            (t, cols[j].clone())
        })
        .collect();
    let mut minimal: Vec<Vec<u64>> = Vec::new();
    let mut nodes = 0usize;

    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for (t, d) in frontier {
            nodes += 1;
            if nodes > limits.max_nodes {
                return Err(Abort::Limit(nodes - 1));
            }
            if d.iter().all(N::is_zero) {
                if t[last] == 1 {
                    return Ok(Some(t[..last].to_vec()));
                }
                minimal.push(t);
                continue;
            }
            for (j, col) in cols.iter().enumerate() {
                if j == last && t[last] == 1 {
                    continue;
                }
                let mut dot = N::from_i64(0);
                for (x, y) in d.iter().zip(col) {
                    dot = dot
                        .add(&x.mul(y).ok_or(Abort::Overflow)?)
                        .ok_or(Abort::Overflow)?;
                }
                if !dot.is_negative() {
                    continue;
                }
                let mut u = t.clone();
                u[j] += 1;
                if minimal
                    .iter()
                    .any(|s| s.iter().zip(&u).all(|(a, b)| a <= b))
                    || seen.contains(&u)
                {
                    continue;
                }
                let mut e = Vec::with_capacity(d.len());
                for (x, y) in d.iter().zip(col) {
                    e.push(x.add(y).ok_or(Abort::Overflow)?);
                }
                seen.insert(u.clone());
                next.push((u, e));
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Some nonzero `x ∈ ℕⁿ` with `Ax = 0`, found by one shifted solve
/// `A x' = −A e_j` per column.
pub fn homogeneous_nonzero(s: &LinearSystem) -> Result<Option<Vec<u64>>, DiophantineError> {
    homogeneous_nonzero_with(s, SolverLimits::default())
}

pub fn homogeneous_nonzero_with(
    s: &LinearSystem,
    limits: SolverLimits,
) -> Result<Option<Vec<u64>>, DiophantineError> {
    if !s.is_homogeneous() {
        return Err(DiophantineError::NotHomogeneous);
    }
    for j in 0..s.cols() {
        let rhs: Vec<i64> = s.columns()[j].iter().map(|&x| -x).collect();
        let shifted = LinearSystem::from_columns(s.columns().to_vec(), rhs)?;
        if let Some(mut x) = solve_nonneg_with(&shifted, limits)? {
            x[j] += 1;
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `v ∈ base + ℕ·periods`.
pub fn linear_set_member(v: &[u64], ls: &LinearSet) -> Result<bool, DiophantineError> {
    if v.len() != ls.dim() {
        return Err(DiophantineError::DimensionMismatch {
            expected: ls.dim(),
            found: v.len(),
        });
    }
    let to_i64 = |x: u64| i64::try_from(x).map_err(|_| DiophantineError::OutOfRange(x));
    let rhs = v
        .iter()
        .zip(&ls.base)
        .map(|(&a, &b)| Ok(to_i64(a)? - to_i64(b)?))
        .collect::<Result<Vec<i64>, DiophantineError>>()?;
    let columns = ls
        .periods
        .iter()
        .map(|p| p.iter().map(|&x| to_i64(x)).collect())
        .collect::<Result<Vec<Vec<i64>>, DiophantineError>>()?;
    let s = LinearSystem::from_columns(columns, rhs)?;
    Ok(solve_nonneg(&s)?.is_some())
}
