//! Put on the minimum of two uncorrelated assets. Multi-asset digitals,
//! exchange options and the European min-put span the majorant.

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{price_upper, BasisFamily, BasisSpec, Contract, Point, SolverOptions};

fn main() -> american_lsip::Result<()> {
    let model = ProcessModel::GbmMulti {
        rate: 0.06,
        vols: vec![0.4, 0.8],
        corr: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    let contract = Contract::expiring(Payoff::MinPut { strike: 100.0 }, 0.5);
    let spec = BasisSpec::new(BasisFamily::MultiDigital, 150, 1)
        .with_support(ParamSupport::Box { lo: vec![0.0; 2], hi: vec![100.0; 2] });
    let m = price_upper(&model, &contract, &Point::new(0.0, vec![100.0, 100.0]), &spec, &SolverOptions::default())?;
    println!("upper bound at (100, 100): {:.4}", m.objective);
    for x1 in [80.0, 100.0, 120.0] {
        let row: Vec<String> = [80.0, 100.0, 120.0].iter().map(|x2| format!("{:8.3}", m.value(0.0, &[x1, *x2]))).collect();
        println!("x1 = {x1:>5}: {}", row.join(""));
    }
    Ok(())
}
