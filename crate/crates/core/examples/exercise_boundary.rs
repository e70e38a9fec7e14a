//! Early-exercise boundary of the American put as a `t,boundary` CSV.
//! Times where the majorant stays above the payoff by more than the
//! contact tolerance have no boundary and print an empty field.

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{
    exercise_boundary, price_upper, BasisFamily, BasisSpec, Contract, Point, SolverOptions,
};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::Gbm1d { rate: 0.06, vol: 0.4 };
    let contract = Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5);
    let spec = BasisSpec::new(BasisFamily::Digital, 100, 1)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 });
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![100.0]), &spec, &SolverOptions::default())?;
    let grid: Vec<f64> = (0..50).map(|i| 0.01 * i as f64).collect();
    let curve = exercise_boundary(&m, &grid)?;
    println!("t,boundary");
    for p in &curve.points {
        println!("{:.2},{}", p.t, p.lower.map_or(String::new(), |b| format!("{b:.4}")));
    }
    Ok(())
}
