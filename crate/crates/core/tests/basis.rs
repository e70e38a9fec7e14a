use american_lsip::basis::*;
use american_lsip::numerics::RandomStream;

/// Central-difference derivatives of `f` at `z` (time first, then space).
fn fd_grad(f: &dyn Fn(&[f64]) -> f64, z: &[f64], steps: &[f64]) -> Vec<f64> {
    (0..z.len())
        .map(|k| {
            let (mut p, mut m) = (z.to_vec(), z.to_vec());
            p[k] += steps[k];
            m[k] -= steps[k];
            (f(&p) - f(&m)) / (2.0 * steps[k])
        })
        .collect()
}

/// Fourth-order central differences.
fn fd_grad5(f: &dyn Fn(&[f64]) -> f64, z: &[f64], steps: &[f64]) -> Vec<f64> {
    (0..z.len())
        .map(|k| {
            let at = |m: f64| {
                let mut p = z.to_vec();
                p[k] += m * steps[k];
                f(&p)
            };
            (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * steps[k])
        })
        .collect()
}

fn fd_hess(f: &dyn Fn(&[f64]) -> f64, z: &[f64], steps: &[f64], i: usize, j: usize) -> f64 {
    let at = |di: f64, dj: f64| {
        let mut p = z.to_vec();
        p[i] += di * steps[i];
        p[j] += dj * steps[j];
        f(&p)
    };
    if i == j {
        (at(1.0, 0.0) - 2.0 * f(z) + at(-1.0, 0.0)) / (steps[i] * steps[i])
    } else {
        (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * steps[i] * steps[j])
    }
}

/// Residual of `(∂_t + L − r)h` for a GBM with the given correlation, and the
/// sum of absolute term sizes.
fn gbm_residual(h: &BasisFunction, r: f64, vols: &[f64], corr: &[Vec<f64>], t: f64, x: &[f64]) -> (f64, f64) {
    let d = x.len();
    let f = |z: &[f64]| h.value(z[0], &z[1..]);
    let mut z = vec![t];
    z.extend_from_slice(x);
    let mut steps = vec![1e-4 * (h.maturity().unwrap() - t)];
    steps.extend(x.iter().map(|v| 1e-4 * v));
    let g = fd_grad(&f, &z, &steps);
    let mut terms = vec![g[0], -r * f(&z)];
    for i in 0..d {
        terms.push(r * x[i] * g[i + 1]);
        for j in 0..d {
            let c = corr[i][j] * vols[i] * vols[j] * x[i] * x[j];
            if c != 0.0 {
                terms.push(0.5 * c * fd_hess(&f, &z, &steps, i + 1, j + 1));
            }
        }
    }
    (terms.iter().sum(), terms.iter().map(|v| v.abs()).sum())
}

#[test]
fn digital_is_space_time_harmonic() {
    let (r, s, t_mat) = (0.06, 0.4, 0.5);
    let mut st = RandomStream::new(1);
    for _ in 0..20 {
        let a = st.uniform_in(60.0, 120.0);
        let h = make_bs_digital(a, r, s, t_mat).unwrap();
        let t = st.uniform_in(0.0, 0.99 * t_mat);
        let x = a * st.uniform_in(0.7, 1.3);
        let (res, scale) = gbm_residual(&h, r, &[s], &[vec![1.0]], t, &[x]);
        assert!(res.abs() <= 1e-4 * scale, "a={a} t={t} x={x}: {res} vs {scale}");
    }
}

#[test]
fn multi_digitals_and_exchanges_are_harmonic() {
    let r = 0.06;
    let vols = vec![0.4, 0.8];
    let mut st = RandomStream::new(2);
    for rho in [0.0, 0.5] {
        let corr = vec![vec![1.0, rho], vec![rho, 1.0]];
        for kind in [OrthantKind::AllBelow, OrthantKind::AnyBelow] {
            for _ in 0..20 {
                let a = vec![st.uniform_in(60.0, 120.0), st.uniform_in(60.0, 120.0)];
                let h = make_multi_digital(a, r, vols.clone(), &corr, 0.5, kind).unwrap();
                let t = st.uniform_in(0.0, 0.4);
                let x = [st.uniform_in(70.0, 130.0), st.uniform_in(70.0, 130.0)];
                let (res, scale) = gbm_residual(&h, r, &vols, &corr, t, &x);
                // the correlated orthant carries quadrature error of order 1e-4
                let tol = if rho == 0.0 { 1e-4 } else { 2e-2 };
                assert!(res.abs() <= tol * scale, "{rho} {kind:?}: {res} vs {scale}");
            }
        }
        for _ in 0..20 {
            let h = make_exchange_basis((1, 0), vols[1], vols[0], rho, 0.5).unwrap();
            let t = st.uniform_in(0.0, 0.45);
            let x = [st.uniform_in(70.0, 130.0), st.uniform_in(70.0, 130.0)];
            let (res, scale) = gbm_residual(&h, r, &vols, &corr, t, &x);
            assert!(res.abs() <= 1e-4 * scale, "exchange: {res} vs {scale}");
        }
    }
}

#[test]
fn ellipsoid_exponentials_are_harmonic() {
    let cov = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let mu = vec![0.0, 0.0];
    let mut st = RandomStream::new(3);
    let basis = sample_ellipsoid_harmonics(&cov, &mu, 0.1, 20, &mut st).unwrap();
    for h in &basis {
        let x = [st.uniform_in(-2.0, 2.0), st.uniform_in(-2.0, 2.0)];
        let f = |z: &[f64]| h.value(0.0, z);
        let steps = [1e-3, 1e-3];
        let lap = fd_hess(&f, &x, &steps, 0, 0) + fd_hess(&f, &x, &steps, 1, 1);
        let res = 0.5 * lap - 0.1 * f(&x);
        assert!(res.abs() <= 1e-4 * f(&x), "{res}");
    }
    let (up, down) = make_harmonic_1d(0.5, 1.0, 1.0).unwrap();
    for h in [up, down] {
        for x in [-1.0, 0.0, 2.0] {
            let f = |z: &[f64]| h.value(0.0, z);
            let g = fd_grad(&f, &[x], &[1e-4])[0];
            let res = 1.0 * g + 0.5 * fd_hess(&f, &[x], &[1e-3], 0, 0) - 0.5 * f(&[x]);
            assert!(res.abs() <= 1e-4 * f(&[x]));
        }
    }
}

/// `(L − r)k` for the compound Poisson generator, integrating the jump term
/// piecewise around the kink.
fn levy_residual(k: &LevyKernel, w: f64) -> (f64, f64) {
    let LevyParams { drift, intensity, jump_rate, rate } = k.params;
    let step = 1e-5;
    let deriv = (k.value(w + step) - k.value(w - step)) / (2.0 * step);
    let f = |y: f64| (k.value(w + y) - k.value(w)) * jump_rate * (-jump_rate * y).exp();
    let kink = (-w).max(0.0);
    let mut integral = 0.0;
    // the right piece starts just past the kink so Simpson sees the right branch
    for (lo, hi) in [(0.0, kink), (kink + 1e-13, kink + 60.0)] {
        let n = 20_000;
        let h = (hi - lo) / n as f64;
        if h == 0.0 {
            continue;
        }
        // Simpson
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        integral += s * h / 3.0;
    }
    let terms = [drift * deriv, intensity * integral, -rate * k.value(w)];
    (terms.iter().sum(), terms.iter().map(|v| v.abs()).sum())
}

#[test]
fn levy_kernel_solves_the_resolvent_equation() {
    for rate in [0.0, 0.5, 2.0] {
        let p = LevyParams { drift: -1.0, intensity: 0.5, jump_rate: 1.0, rate };
        let k = LevyKernel::closed_form(p).unwrap();
        for w in [-3.0, -1.0, -0.2, 0.3, 1.0, 4.0] {
            let (res, scale) = levy_residual(&k, w);
            assert!(res.abs() <= 1e-6 * scale.max(1e-12), "r={rate} w={w}: {res} vs {scale}");
        }
    }
}

#[test]
fn levy_kernel_matches_occupation_oracle() {
    let p = LevyParams { drift: -1.0, intensity: 0.5, jump_rate: 1.0, rate: 2.0 };
    let k = LevyKernel::closed_form(p).unwrap();
    let points = [-1.0, -0.1, 0.5];
    let mut st = RandomStream::new(4);
    let mc = occupation_density_mc(&p, &points, 0.05, 1_000_000, &mut st);
    for (w, (est, se)) in points.iter().zip(mc) {
        let exact = k.bin_average(w - 0.025, w + 0.025);
        assert!((est - exact).abs() <= 0.02 * exact, "k({w}) {exact} vs {est} ± {se}");
    }
}

#[test]
fn analytic_partials_match_finite_differences() {
    let mut st = RandomStream::new(5);
    let vols = [0.4, 0.8];
    let mut checked = 0;
    for i in 0..100 {
        let h = match i % 3 {
            0 => make_bs_digital(st.uniform_in(50.0, 120.0), 0.06, 0.4, 0.5).unwrap(),
            1 => make_exchange_basis((0, 1), vols[0], vols[1], 0.3, 0.5).unwrap(),
            _ => BasisFunction::Exponential(Exponential { coef: vec![st.uniform_in(-0.5, 0.5), 0.2] }),
        };
        let t = st.uniform_in(0.0, 0.45);
        let x = [st.uniform_in(70.0, 130.0), st.uniform_in(70.0, 130.0)];
        let x = if i % 3 == 2 { [x[0] / 50.0, x[1] / 50.0] } else { x };
        let p = h.partials(t, &x).unwrap();
        let f = |z: &[f64]| h.value(z[0], &z[1..]);
        let z = [t, x[0], x[1]];
        let steps = [1e-5, 1e-4 * x[0], 1e-4 * x[1]];
        let g = fd_grad5(&f, &z, &steps);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-6 * a.abs().max(b.abs()) + 1e-10;
        assert!(close(p.theta, g[0]), "theta {} vs {}", p.theta, g[0]);
        for k in 0..2 {
            assert!(close(p.delta[k], g[k + 1]), "delta {} vs {}", p.delta[k], g[k + 1]);
        }
        checked += 1;
    }
    assert_eq!(checked, 100);
}

#[test]
fn basis_values_are_nonnegative() {
    let mut st = RandomStream::new(6);
    let corr = vec![vec![1.0, -0.3], vec![-0.3, 1.0]];
    let p = LevyParams { drift: -1.0, intensity: 0.5, jump_rate: 1.0, rate: 2.0 };
    let basis = vec![
        make_bs_digital(90.0, 0.06, 0.4, 0.5).unwrap(),
        make_multi_digital(vec![90.0, 80.0], 0.06, vec![0.4, 0.8], &corr, 0.5, OrthantKind::AllBelow).unwrap(),
        make_multi_digital(vec![90.0, 80.0], 0.06, vec![0.4, 0.8], &corr, 0.5, OrthantKind::AnyBelow).unwrap(),
        make_exchange_basis((0, 1), 0.4, 0.8, -0.3, 0.5).unwrap(),
        make_levy_green_basis(p, 3.0).unwrap(),
    ];
    for _ in 0..10_000 {
        let t = st.uniform_in(0.0, 0.5);
        let x = [st.uniform_in(1e-3, 300.0), st.uniform_in(1e-3, 300.0)];
        for h in &basis {
            assert!(h.value(t, &x) >= 0.0);
        }
    }
}
