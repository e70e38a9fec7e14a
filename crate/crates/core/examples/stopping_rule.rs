//! The ε-stopping rule of a majorant: stop once the gain is within ε of it.

use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{
    price_upper, stopping_rule, BasisFamily, BasisSpec, Contract, Point, SolverOptions,
};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::BmDrift { rate: 0.1, drift: vec![0.0], cov: vec![vec![1.0]] };
    let contract = Contract::perpetual(Payoff::Square);
    let spec = BasisSpec::new(BasisFamily::HarmonicPair, 0, 1);
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![0.0]), &spec, &SolverOptions::default())?;
    for eps in [0.01, 0.2] {
        let rule = stopping_rule(&m, eps)?;
        let decisions: Vec<String> = [0.0, 3.0, 4.618, 5.0]
            .iter()
            .map(|x| format!("x={x}: {}", if rule.stop(0.0, &[*x]) { "stop" } else { "continue" }))
            .collect();
        println!("ε = {eps}: {}", decisions.join(", "));
    }
    Ok(())
}
