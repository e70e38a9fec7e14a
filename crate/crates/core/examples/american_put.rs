//! One-asset American put under Black-Scholes. One solve at x = 100 gives an
//! analytic majorant that is then evaluated at other spots and times.

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{price_upper, BasisFamily, BasisSpec, Contract, Point, SolverOptions};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::Gbm1d { rate: 0.06, vol: 0.4 };
    let contract = Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5);
    let spec = BasisSpec::new(BasisFamily::Digital, 100, 1)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 });
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![100.0]), &spec, &SolverOptions::default())?;
    println!("upper bound at (0, 100): {:.4} ({} cuts)", m.objective, m.solution.cuts.len());
    let active = m.lambda.iter().filter(|l| **l > 0.0).count();
    println!("{active} of {} basis functions active", m.basis.len());
    for x in [80.0, 90.0, 110.0, 120.0] {
        println!("x = {x:>5}: {:.4}", m.evaluate(0.0, &[x])?);
    }
    println!("x = 100 at t = 0.25: {:.4}", m.evaluate(0.25, &[100.0])?);
    Ok(())
}
