//! Delta, gamma and theta of the put majorant, analytic and by differences.

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{
    finite_difference_greeks, greeks, price_upper, BasisFamily, BasisSpec, Contract, Point,
    SolverOptions,
};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::Gbm1d { rate: 0.06, vol: 0.4 };
    let contract = Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5);
    let spec = BasisSpec::new(BasisFamily::Digital, 100, 1)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 });
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![100.0]), &spec, &SolverOptions::default())?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "x", "delta", "gamma", "theta", "fd delta");
    for x in [85.0, 95.0, 100.0, 105.0, 115.0] {
        let g = greeks(&m, 0.0, &[x])?;
        let fd = finite_difference_greeks(&m, 0.0, &[x]);
        println!("{x:>6} {:>10.5} {:>10.5} {:>10.4} {:>10.5}", g.delta[0], g.gamma[0], g.theta, fd.delta[0]);
    }
    Ok(())
}
