//! Exact nonnegative integer solutions of `Ax = b`.

mod presolve;
mod scalar;
mod solver;
mod system;

pub use solver::{
    homogeneous_nonzero, homogeneous_nonzero_with, linear_set_member, solve_nonneg,
    solve_nonneg_with, SolverLimits,
};
pub use system::{DiophantineError, LinearSet, LinearSystem};
