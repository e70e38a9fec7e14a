//! The cutting-plane solver on its own: any nonnegative basis, any gain.
//! Here a call-like gain (x − 1)⁺ on [0, 4] is majorized by three exponentials.

use std::sync::Arc;

use american_lsip::basis::{BasisFunction, Exponential};
use american_lsip::lsip::{cutting_plane_solve, verify_feasibility, LsipOptions, LsipProblem};
use american_lsip::numerics::{RandomStream, SearchBox};

fn main() -> american_lsip::Result<()> {
    let basis = [0.3, 0.6, 1.2]
        .iter()
        .map(|a| BasisFunction::Exponential(Exponential { coef: vec![*a] }))
        .collect();
    let prob = LsipProblem {
        basis,
        gain: Arc::new(|x: &[f64]| (x[0] - 1.0).max(0.0)),
        horizon: None,
        domain: SearchBox::new(vec![0.0], vec![4.0]),
        anchor: vec![0.0],
        options: LsipOptions::default(),
    };
    let sol = cutting_plane_solve(&prob, &mut RandomStream::new(1))?;
    println!("objective {:.6}, λ = {:?}", sol.objective, sol.lambda);
    println!("{} cuts, termination {:?}", sol.cuts.len(), sol.termination);
    let (_, worst) = verify_feasibility(&prob, &sol.lambda, 10_000, 2);
    println!("smallest slack on a fresh grid: {worst:.2e}");
    Ok(())
}
