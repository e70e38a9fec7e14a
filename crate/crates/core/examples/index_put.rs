//! Perpetual put on an index of two log-prices, with exponentials drawn from
//! the harmonic ellipsoid. Each starting point gets its own solve.

use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{
    default_epsilon, price_upper, stopping_rule, BasisFamily, BasisSpec, Contract, Point,
    SolverOptions,
};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::BmDrift {
        rate: 0.1,
        drift: vec![0.0, 0.0],
        cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    let contract = Contract::perpetual(Payoff::IndexPut { strike: 10.0, weights: vec![1.0, 1.0] });
    for x0 in [[0.7, 0.2], [0.7, 0.7], [1.0, 1.0], [1.4, 0.6]] {
        let spec = BasisSpec::new(BasisFamily::Ellipsoid, 30, 1);
        let m = price_upper(&model, &contract, &Point::new(0.0, x0.to_vec()), &spec, &SolverOptions::default())?;
        let stop = stopping_rule(&m, default_epsilon(&m))?.stop(0.0, &x0);
        println!("{x0:?}: gain {:.4}, upper {:.4}, stop now: {stop}", m.gain(&x0), m.objective);
    }
    Ok(())
}
