//! Volatility at which the put majorant reproduces a quoted price.

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{
    implied_vol, BasisFamily, BasisSpec, Contract, ImpliedVolOptions, Point, SolverOptions,
};

fn main() -> american_lsip::Result<()> {
    let template = ProcessModel::Gbm1d { rate: 0.06, vol: 0.2 };
    let contract = Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5);
    let spec = BasisSpec::new(BasisFamily::Digital, 100, 1)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 });
    let opts = ImpliedVolOptions { sigma0: 0.8, ..Default::default() };
    let quote = 9.9451;
    let r = implied_vol(quote, &template, &contract, &Point::new(0.0, vec![100.0]), &spec, &SolverOptions::default(), &opts)?;
    for (k, s) in r.sigmas.iter().enumerate() {
        println!("σ_{k} = {s:.6}");
    }
    println!("converged: {} after {} fits", r.converged, r.outer_iterations());
    Ok(())
}
