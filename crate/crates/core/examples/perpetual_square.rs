//! Perpetual problem: Brownian motion, gain x², discount rate 10%.
//! Two exponentials span the majorant; the boundary is where it touches x².

use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{
    exercise_boundary, price_upper, BasisFamily, BasisSpec, Contract, Point, SolverOptions,
};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::BmDrift { rate: 0.1, drift: vec![0.0], cov: vec![vec![1.0]] };
    let contract = Contract::perpetual(Payoff::Square);
    let spec = BasisSpec::new(BasisFamily::HarmonicPair, 0, 1);
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![0.0]), &spec, &SolverOptions::default())?;
    println!("upper bound at 0: {:.4}", m.objective);
    println!("coefficients: {:?}", m.lambda);
    let b = exercise_boundary(&m, &[0.0])?;
    let p = &b.points[0];
    println!("continue while x in ({:.4}, {:.4})", p.lower.unwrap(), p.upper.unwrap());
    Ok(())
}
