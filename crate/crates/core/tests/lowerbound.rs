mod common;

use std::sync::OnceLock;

use american_lsip::lowerbound::{lower_bound_mc, pairwise_sum, LowerBoundOptions};
use american_lsip::models::Payoff;
use american_lsip::numerics::RandomStream;
use american_lsip::pricer::*;
use common::*;

fn put_majorant() -> &'static Majorant {
    static M: OnceLock<Majorant> = OnceLock::new();
    M.get_or_init(|| {
        price_upper(&put_model(), &put_contract(), &put_anchor(), &put_basis(1), &SolverOptions::default())
            .unwrap()
    })
}

fn opts(eps: f64, n_paths: usize) -> LowerBoundOptions {
    LowerBoundOptions { eps: Some(eps), n_paths, dt: Some(1.0 / 500.0), horizon: None }
}

#[test]
fn huge_epsilon_stops_at_once() {
    let m = put_majorant();
    let r = lower_bound_mc(m, &opts(1e10, 1000), &mut RandomStream::new(1)).unwrap();
    assert_eq!(r.estimate, m.gain(&[100.0]));
    assert_eq!(r.stderr, 0.0);
    let m = price_upper(
        &put_model(),
        &put_contract(),
        &Point::new(0.0, vec![90.0]),
        &put_basis(1),
        &SolverOptions::default(),
    )
    .unwrap();
    let r = lower_bound_mc(&m, &opts(1e10, 1000), &mut RandomStream::new(1)).unwrap();
    assert_eq!(r.estimate, 10.0);
    assert_eq!(r.stderr, 0.0);
}

#[test]
fn zero_gain_gives_zero() {
    let c = Contract::expiring(Payoff::Put { strike: 1e-9 }, 0.5);
    let m = price_upper(&put_model(), &c, &put_anchor(), &put_basis(2), &SolverOptions::default()).unwrap();
    let r = lower_bound_mc(&m, &opts(0.01, 2000), &mut RandomStream::new(3)).unwrap();
    assert_eq!(r.estimate, 0.0);
}

#[test]
fn put_lower_bound_sandwiches_the_price() {
    let m = put_majorant();
    let r = lower_bound_mc(m, &opts(0.05, 100_000), &mut RandomStream::new(5)).unwrap();
    assert!(r.estimate >= 9.80, "{r:?}");
    assert!(r.estimate <= m.objective + 3.0 * r.stderr, "{r:?}");
    assert!(m.objective - r.estimate <= 0.2, "{r:?}");
    assert!((r.dt - 1.0 / 500.0).abs() < 1e-12 && r.horizon == 0.5);
}

#[test]
fn estimate_is_nonincreasing_in_epsilon() {
    let m = put_majorant();
    let mut last: Option<(f64, f64)> = None;
    for eps in [0.01, 0.1, 1.0] {
        let r = lower_bound_mc(m, &opts(eps, 20_000), &mut RandomStream::new(9)).unwrap();
        if let Some((v, se)) = last {
            assert!(r.estimate <= v + 3.0 * se.max(r.stderr), "ε={eps}: {} after {v}", r.estimate);
        }
        last = Some((r.estimate, r.stderr));
    }
}

#[test]
fn independent_of_thread_count() {
    let m = put_majorant();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| lower_bound_mc(m, &opts(0.05, 5000), &mut RandomStream::new(17)).unwrap())
    };
    let (one, four) = (run(1), run(4));
    assert_eq!(one.estimate.to_bits(), four.estimate.to_bits());
    assert_eq!(one.stderr.to_bits(), four.stderr.to_bits());
}

#[test]
fn perpetual_problems_report_a_truncation_horizon() {
    let spec = BasisSpec::new(BasisFamily::HarmonicPair, 0, 1);
    let m = price_upper(&square_model(), &square_contract(), &Point::new(0.0, vec![0.0]), &spec, &SolverOptions::default())
        .unwrap();
    let o = LowerBoundOptions { eps: Some(0.01), n_paths: 4000, dt: Some(0.01), horizon: None };
    let r = lower_bound_mc(&m, &o, &mut RandomStream::new(2)).unwrap();
    assert!(r.horizon > 10.0);
    assert!(r.estimate <= m.objective + 3.0 * r.stderr, "{r:?}");
    assert!(r.estimate > 0.8 * m.objective, "{r:?}");
    let bad = LowerBoundOptions { horizon: Some(-1.0), ..o };
    assert!(lower_bound_mc(&m, &bad, &mut RandomStream::new(2)).is_err());
}

#[test]
fn pairwise_sum_is_exact_on_integers() {
    let v: Vec<f64> = (1..=1000).map(f64::from).collect();
    assert_eq!(pairwise_sum(&v), 500_500.0);
    assert_eq!(pairwise_sum(&[]), 0.0);
}
