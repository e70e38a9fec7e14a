//! Power payoff (x⁺)^2.5 under drift plus exponential upward jumps. Shifted
//! resolvent kernels span the majorant; prints `x,upper,gain` as CSV.

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{price_upper, BasisFamily, BasisSpec, Contract, Point, SolverOptions};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::CppExp { rate: 2.0, drift: -1.0, intensity: 0.5, jump_rate: 1.0 };
    let contract = Contract::perpetual(Payoff::Power { exponent: 2.5 });
    let spec = BasisSpec::new(BasisFamily::LevyGreen, 150, 1)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 20.0 });
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![0.0]), &spec, &SolverOptions::default())?;
    eprintln!("upper bound at 0: {:.5}", m.objective);
    println!("x,upper,gain");
    for i in 0..=120 {
        let x = -2.0 + 0.05 * i as f64;
        println!("{x:.2},{:.6},{:.6}", m.value(0.0, &[x]), m.gain(&[x]));
    }
    Ok(())
}
