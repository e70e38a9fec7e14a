//! Monte Carlo lower bound from the ε-stopping rule of the put majorant,
//! bracketing the price between two numbers.

use american_lsip::basis::ParamSupport;
use american_lsip::lowerbound::{lower_bound_mc, LowerBoundOptions};
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::numerics::RandomStream;
use american_lsip::pricer::{price_upper, BasisFamily, BasisSpec, Contract, Point, SolverOptions};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::Gbm1d { rate: 0.06, vol: 0.4 };
    let contract = Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5);
    let spec = BasisSpec::new(BasisFamily::Digital, 100, 1)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 });
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![100.0]), &spec, &SolverOptions::default())?;
    let opts = LowerBoundOptions { eps: Some(0.05), n_paths: 100_000, dt: Some(1.0 / 500.0), horizon: None };
    let lb = lower_bound_mc(&m, &opts, &mut RandomStream::new(7))?;
    println!("lower {:.4} ± {:.4}   upper {:.4}", lb.estimate, lb.stderr, m.objective);
    Ok(())
}
