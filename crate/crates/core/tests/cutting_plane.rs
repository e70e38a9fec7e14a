use std::sync::Arc;

use american_lsip::basis::{make_bs_digital, make_harmonic_1d, BasisFunction, Exponential};
use american_lsip::lsip::*;
use american_lsip::numerics::{RandomStream, SearchBox};
use american_lsip::Error;

fn square_problem() -> LsipProblem {
    let (up, down) = make_harmonic_1d(0.1, 0.0, 1.0).unwrap();
    LsipProblem {
        basis: vec![up, down],
        gain: Arc::new(|x: &[f64]| x[0] * x[0]),
        horizon: None,
        domain: SearchBox::new(vec![-8.0], vec![8.0]),
        anchor: vec![0.0],
        options: LsipOptions::default(),
    }
}

fn put_problem(n: usize, seed: u64, scale: f64) -> LsipProblem {
    let mut s = RandomStream::new(seed);
    // the strike digital closes the gap below K at expiry
    let basis = (0..n)
        .map(|_| s.uniform_in(20.0, 100.0))
        .chain([100.0])
        .map(|a| make_bs_digital(a, 0.06, 0.4, 0.5).unwrap())
        .collect();
    LsipProblem {
        basis,
        gain: Arc::new(move |x: &[f64]| scale * (100.0 - x[0]).max(0.0)),
        horizon: Some(0.5),
        domain: SearchBox::new(vec![0.0, 1e-6], vec![0.5, 120.0]),
        anchor: vec![0.0, 100.0],
        options: LsipOptions::default(),
    }
}

#[test]
fn perpetual_square_example() {
    let prob = square_problem();
    let sol = cutting_plane_solve(&prob, &mut RandomStream::new(1)).unwrap();
    assert!(sol.certified());
    // λ = 2/(a² cosh(a b)) with a·b·tanh(a·b) = 2, a = √0.2
    assert!((sol.objective - 5.32222).abs() < 5e-3, "{}", sol.objective);
    for l in &sol.lambda {
        assert!((l - 2.66111).abs() < 5e-3, "{l}");
    }
    let check = prob.basis_row(&prob.anchor);
    let direct: f64 = sol.lambda.iter().zip(&check).map(|(l, h)| l * h).sum();
    assert!((direct - sol.objective).abs() < 1e-10);
}

#[test]
fn zero_gain_gives_zero() {
    let mut prob = square_problem();
    prob.gain = Arc::new(|_| 0.0);
    let sol = cutting_plane_solve(&prob, &mut RandomStream::new(1)).unwrap();
    assert!(sol.certified());
    assert_eq!(sol.objective, 0.0);
    assert!(sol.lambda.iter().all(|l| *l == 0.0));
    assert_eq!(sol.history.len(), 1);
}

#[test]
fn single_function_matches_grid_ratio() {
    let mut prob = square_problem();
    let a = -(0.2f64.sqrt());
    prob.basis = vec![BasisFunction::Exponential(Exponential { coef: vec![a] })];
    prob.gain = Arc::new(|x: &[f64]| (2.0 - x[0]).max(0.0));
    let sol = cutting_plane_solve(&prob, &mut RandomStream::new(3)).unwrap();
    let ratio = (0..10_000)
        .map(|i| -8.0 + 16.0 * i as f64 / 9_999.0)
        .map(|x| (2.0 - x).max(0.0) / (a * x).exp())
        .fold(0.0f64, f64::max);
    assert!((sol.objective - ratio).abs() < 1e-4 * 2.0, "{} vs {ratio}", sol.objective);
}

#[test]
fn history_is_nondecreasing_and_feasible() {
    let prob = put_problem(30, 7, 1.0);
    let sol = cutting_plane_solve(&prob, &mut RandomStream::new(7)).unwrap();
    assert!(sol.certified());
    for w in sol.history.windows(2) {
        assert!(w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0), "{} then {}", w[0], w[1]);
    }
    let (_, worst) = verify_feasibility(&prob, &sol.lambda, 100_000, 99);
    assert!(worst >= -sol.tol_feas, "{worst}");
}

#[test]
fn gain_scaling_is_homogeneous() {
    let base = cutting_plane_solve(&put_problem(20, 5, 1.0), &mut RandomStream::new(5)).unwrap();
    let scaled = cutting_plane_solve(&put_problem(20, 5, 3.0), &mut RandomStream::new(5)).unwrap();
    let rel = (scaled.objective - 3.0 * base.objective).abs() / (3.0 * base.objective);
    assert!(rel < 1e-8, "{} vs {}", scaled.objective, 3.0 * base.objective);
}

#[test]
fn nested_bases_do_not_increase_objective() {
    let small = put_problem(15, 11, 1.0);
    let mut large = put_problem(15, 11, 1.0);
    large.basis.extend(put_problem(15, 12, 1.0).basis);
    let a = cutting_plane_solve(&small, &mut RandomStream::new(1)).unwrap();
    let b = cutting_plane_solve(&large, &mut RandomStream::new(1)).unwrap();
    assert!(b.objective <= a.objective + a.tol_feas, "{} > {}", b.objective, a.objective);
}

#[test]
fn vanishing_basis_is_insufficient() {
    let mut prob = put_problem(1, 1, 1.0);
    prob.basis = vec![make_bs_digital(50.0, 0.06, 0.4, 0.5).unwrap()];
    let err = cutting_plane_solve(&prob, &mut RandomStream::new(1)).unwrap_err();
    assert!(matches!(err, Error::BasisInsufficient { .. }), "{err:?}");
}
