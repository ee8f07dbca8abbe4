use num_integer::Integer;

use super::system::LinearSystem;

/// A system shrunk by sound eliminations: dropped columns are 0 in some
/// solution whenever the original system has one.
pub(crate) enum Presolved {
    Infeasible,
    Reduced {
        keep: Vec<usize>,
        columns: Vec<Vec<i64>>,
        rhs: Vec<i64>,
    },
}

pub(crate) fn presolve(s: &LinearSystem) -> Presolved {
    let cols = s.columns();
    let rhs = s.rhs();
    let mut alive = vec![true; cols.len()];
    loop {
        let mut changed = false;
        for (i, &b) in rhs.iter().enumerate() {
            let entries: Vec<(usize, i64)> = (0..cols.len())
                .filter(|&j| alive[j])
                .map(|j| (j, cols[j][i]))
                .collect();
            let nonneg = entries.iter().all(|&(_, x)| x >= 0);
            let nonpos = entries.iter().all(|&(_, x)| x <= 0);
            if (nonneg && b < 0) || (nonpos && b > 0) {
                return Presolved::Infeasible;
            }
            // A sign-definite row with zero right-hand side forces its support to 0.
            if (nonneg || nonpos) && b == 0 {
                for &(j, x) in &entries {
                    if x != 0 {
                        alive[j] = false;
                        changed = true;
                    }
                }
            }
            let g = entries.iter().fold(0i64, |g, &(_, x)| g.gcd(&x));
            if g == 0 {
                if b != 0 {
                    return Presolved::Infeasible;
                }
            } else if b % g != 0 {
                return Presolved::Infeasible;
            }
        }
        if !changed {
            break;
        }
    }
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..cols.len() {
        if !alive[j] || cols[j].iter().all(|&x| x == 0) {
            continue;
        }
        if keep.iter().any(|&k| cols[k] == cols[j]) {
            continue;
        }
        keep.push(j);
    }
    let live_rows: Vec<usize> = (0..rhs.len())
        .filter(|&i| rhs[i] != 0 || keep.iter().any(|&j| cols[j][i] != 0))
        .collect();
    let columns = keep
        .iter()
        .map(|&j| live_rows.iter().map(|&i| cols[j][i]).collect())
        .collect();
    let rhs = live_rows.iter().map(|&i| rhs[i]).collect();
    Presolved::Reduced { keep, columns, rhs }
}
