//! Finite LP solver and the cutting-plane method for the semi-infinite program.

pub mod cutting_plane;
pub mod finite_lp;
pub mod simplex;

pub use cutting_plane::{
    cutting_plane_solve, verify_feasibility, GainFn, LsipOptions, LsipProblem, MajorantSolution,
    Termination,
};
pub use finite_lp::{solve_finite_lp, FiniteLP, IncrementalLp, LpSolution, LpStatus};
