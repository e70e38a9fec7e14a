//! Standard configurations shared by the integration tests.
#![allow(dead_code)]

pub mod lp;

use american_lsip::basis::ParamSupport;
use american_lsip::models::{Payoff, ProcessModel};
use american_lsip::pricer::{BasisFamily, BasisSpec, Contract, Point};

/// American put values at x = 80, 90, 100, 110, 120 from a CRR binomial tree
/// (N = 20000 and 40000, Richardson extrapolated), cross-checked with a
/// smoothed binomial tree.
pub const PUT_REFERENCE: [(f64, f64); 5] =
    [(80.0, 21.60574), (90.0, 14.91763), (100.0, 9.94514), (110.0, 6.43378), (120.0, 4.06004)];

pub fn put_model() -> ProcessModel {
    ProcessModel::Gbm1d { rate: 0.06, vol: 0.4 }
}

pub fn put_contract() -> Contract {
    Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5)
}

pub fn put_anchor() -> Point {
    Point::new(0.0, vec![100.0])
}

pub fn put_basis(seed: u64) -> BasisSpec {
    BasisSpec::new(BasisFamily::Digital, 100, seed)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 })
}

pub fn min_put_model(vols: Vec<f64>) -> ProcessModel {
    let d = vols.len();
    let corr = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    ProcessModel::GbmMulti { rate: 0.06, vols, corr }
}

pub fn min_put_contract() -> Contract {
    Contract::expiring(Payoff::MinPut { strike: 100.0 }, 0.5)
}

pub fn min_put_basis(d: usize, seed: u64) -> BasisSpec {
    BasisSpec::new(BasisFamily::MultiDigital, 150, seed)
        .with_support(ParamSupport::Box { lo: vec![0.0; d], hi: vec![100.0; d] })
}

/// Standard Brownian motion discounted at 10% with the gain x².
pub fn square_model() -> ProcessModel {
    ProcessModel::BmDrift { rate: 0.1, drift: vec![0.0], cov: vec![vec![1.0]] }
}

pub fn square_contract() -> Contract {
    Contract::perpetual(Payoff::Square)
}

pub fn index_put_model() -> ProcessModel {
    ProcessModel::BmDrift {
        rate: 0.1,
        drift: vec![0.0, 0.0],
        cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    }
}

pub fn index_put_contract() -> Contract {
    Contract::perpetual(Payoff::IndexPut { strike: 10.0, weights: vec![1.0, 1.0] })
}

pub fn levy_model() -> ProcessModel {
    ProcessModel::CppExp { rate: 2.0, drift: -1.0, intensity: 0.5, jump_rate: 1.0 }
}

pub fn levy_contract() -> Contract {
    Contract::perpetual(Payoff::Power { exponent: 2.5 })
}

pub fn levy_basis(seed: u64) -> BasisSpec {
    BasisSpec::new(BasisFamily::LevyGreen, 150, seed)
        .with_support(ParamSupport::Interval { lo: 0.0, hi: 20.0 })
}
