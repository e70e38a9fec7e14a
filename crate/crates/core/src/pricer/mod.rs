//! Majorant fitting and the quantities derived from it.

mod boundary;
mod greeks;
mod implied;
mod majorant;
mod spec;
mod stopping;

pub use boundary::{
    exercise_boundary, exercise_boundary_on, BoundaryCurve, BoundaryPoint, Section, StopSide,
    BOUNDARY_SCAN,
};
pub use greeks::{finite_difference_greeks, greeks, Greeks};
pub use implied::{implied_vol, ImpliedVolOptions, ImpliedVolResult};
pub use majorant::{
    build_basis, evaluate_majorant, fit_majorant, fit_with_basis, price_upper, Majorant,
};
pub use spec::{BasisFamily, BasisSpec, BoxOverride, Contract, Point, SolverOptions};
pub use stopping::{default_epsilon, stopping_rule, StoppingRule};
