//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails. Pass `--include-ignored` (or set
//! `AMLSIP_SLOW=1`) to add the ten- and fifteen-asset rows.

mod common;

use std::sync::Arc;
use std::time::Instant;

use american_lsip::basis::{occupation_density_mc, LevyKernel, LevyParams};
use american_lsip::lowerbound::{lower_bound_mc, LowerBoundOptions};
use american_lsip::lsip::{cutting_plane_solve, solve_finite_lp, verify_feasibility, LpStatus};
use american_lsip::numerics::RandomStream;
use american_lsip::pricer::*;
use common::lp::{random_instance, vertex_oracle};
use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Solver runs collected for the solver-property criterion.
#[derive(Default)]
struct Runs {
    majorants: Vec<(String, Majorant)>,
}

impl Runs {
    fn keep(&mut self, name: String, m: &Majorant) {
        self.majorants.push((name, m.clone()));
    }
}

fn nondecreasing(history: &[f64]) -> bool {
    history.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0))
}

fn perpetual_square(runs: &mut Runs) -> Outcome {
    let start = Instant::now();
    let spec = BasisSpec::new(BasisFamily::HarmonicPair, 0, 1);
    let m = match price_upper(&square_model(), &square_contract(), &Point::new(0.0, vec![0.0]), &spec, &SolverOptions::default()) {
        Ok(m) => m,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let b = exercise_boundary(&m, &[0.0]);
    let secs = start.elapsed().as_secs_f64();
    runs.keep("square".into(), &m);
    let (lo, hi) = match &b {
        Ok(b) => (b.points[0].lower.unwrap_or(f64::NAN), b.points[0].upper.unwrap_or(f64::NAN)),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let pass = (m.objective - 5.322).abs() <= 0.005
        && m.lambda.iter().all(|l| (l - 2.661).abs() <= 0.005)
        && (lo + 4.618).abs() <= 0.02
        && (hi - 4.618).abs() <= 0.02
        && secs < 1.0;
    Outcome::new(
        pass,
        format!(
            "objective {:.4}, λ = ({:.4}, {:.4}), boundary ({lo:.4}, {hi:.4}), {secs:.2}s",
            m.objective, m.lambda[0], m.lambda[1]
        ),
    )
}

fn put_table(runs: &mut Runs) -> Outcome {
    let printed = [(80.0, 21.615, 21.606), (90.0, 14.923, 14.919), (110.0, 6.439, 6.435), (120.0, 4.064, 4.061)];
    let mut passing = 0;
    let mut lines = Vec::new();
    let mut dominates = true;
    for seed in 1..=10 {
        let start = Instant::now();
        let m = match price_upper(&put_model(), &put_contract(), &put_anchor(), &put_basis(seed), &SolverOptions::default()) {
            Ok(m) => m,
            Err(e) => {
                lines.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let secs = start.elapsed().as_secs_f64();
        let mut ok = (9.946..=10.0).contains(&m.objective) && secs < 60.0;
        for (x, rlp, truth) in printed {
            let h = m.value(0.0, &[x]);
            ok &= (h - rlp).abs() <= 0.05 && h >= truth;
        }
        for (x, v) in PUT_REFERENCE {
            dominates &= m.value(0.0, &[x]) >= v - m.tol_feas();
        }
        passing += ok as usize;
        lines.push(format!("{:.4}", m.objective));
        runs.keep(format!("put seed {seed}"), &m);
    }
    Outcome::new(
        passing >= 8,
        format!(
            "{passing}/10 seeds in window; objectives [{}]; dominates binomial reference: {dominates}",
            lines.join(", ")
        ),
    )
}

const MIN_PUT_POINTS: [([f64; 2], f64, f64); 9] = [
    ([80.0, 80.0], 38.01, 38.35),
    ([80.0, 100.0], 32.23, 32.60),
    ([80.0, 120.0], 28.54, 29.01),
    ([100.0, 80.0], 33.34, 33.59),
    ([100.0, 100.0], 25.81, 26.02),
    ([100.0, 120.0], 20.75, 21.05),
    ([120.0, 80.0], 31.21, 31.31),
    ([120.0, 100.0], 22.77, 22.83),
    ([120.0, 120.0], 16.98, 16.98),
];

fn min_put_two_assets(runs: &mut Runs) -> Outcome {
    let model = min_put_model(vec![0.4, 0.8]);
    let anchor = Point::new(0.0, vec![100.0, 100.0]);
    let mut passing = 0;
    let mut lines = Vec::new();
    for seed in 1..=10 {
        let start = Instant::now();
        let m = match price_upper(&model, &min_put_contract(), &anchor, &min_put_basis(2, seed), &SolverOptions::default()) {
            Ok(m) => m,
            Err(e) => {
                lines.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let secs = start.elapsed().as_secs_f64();
        let points = MIN_PUT_POINTS
            .iter()
            .filter(|(x, lo, hi)| {
                let h = m.value(0.0, x);
                if *x == [100.0, 100.0] {
                    (25.81..=26.10).contains(&h)
                } else {
                    h >= lo - 0.15 && h <= hi + 0.15
                }
            })
            .count();
        let ok = (25.81..=26.10).contains(&m.objective) && points >= 7 && secs < 300.0;
        passing += ok as usize;
        lines.push(format!("{:.3} ({points}/9, {secs:.0}s)", m.objective));
        runs.keep(format!("min-put 2d seed {seed}"), &m);
    }
    Outcome::new(passing >= 8, format!("{passing}/10 seeds pass; {}", lines.join(", ")))
}

fn min_put_equal_vols(runs: &mut Runs, slow: bool) -> Outcome {
    let mut rows: Vec<(usize, f64, f64)> = vec![(2, 24.87, 25.25), (5, 39.01, 39.70)];
    if slow {
        // the fifteen-asset interval is printed with its ends swapped
        rows.extend([(10, 47.99 - 0.5, 48.33 + 0.5), (15, 52.14 - 0.5, 52.23 + 0.5)]);
    }
    let mut pass = true;
    let mut lines = Vec::new();
    for (d, lo, hi) in rows {
        let start = Instant::now();
        let anchor = Point::new(0.0, vec![100.0; d]);
        match price_upper(&min_put_model(vec![0.6; d]), &min_put_contract(), &anchor, &min_put_basis(d, 1), &SolverOptions::default()) {
            Ok(m) => {
                let secs = start.elapsed().as_secs_f64();
                let ok = (lo..=hi).contains(&m.objective) && (d > 5 || secs < 600.0);
                pass &= ok;
                lines.push(format!("d={d}: {:.3} in [{lo:.2}, {hi:.2}] {ok} ({secs:.0}s)", m.objective));
                runs.keep(format!("min-put d={d}"), &m);
            }
            Err(e) => {
                pass = false;
                lines.push(format!("d={d}: {e}"));
            }
        }
    }
    if !slow {
        lines.push("d=10, 15 skipped (slow)".into());
    }
    Outcome::new(pass, lines.join("; "))
}

fn index_put(runs: &mut Runs) -> Outcome {
    let targets = [([0.7, 0.2], 6.764, 0.02), ([0.7, 0.7], 5.977, 0.02), ([1.0, 1.0], 4.944, 0.08), ([1.4, 0.6], 4.778, 0.05)];
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for (x, want, tol) in targets {
        let spec = BasisSpec::new(BasisFamily::Ellipsoid, 30, 1);
        match price_upper(&index_put_model(), &index_put_contract(), &Point::new(0.0, x.to_vec()), &spec, &SolverOptions::default()) {
            Ok(m) => {
                pass &= (m.objective - want).abs() <= tol;
                lines.push(format!("{x:?}: {:.4} vs {want} ± {tol}", m.objective));
                runs.keep(format!("index put {x:?}"), &m);
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{x:?}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(pass && secs < 60.0, format!("{}; {secs:.1}s", lines.join(", ")))
}

fn levy(runs: &mut Runs) -> Outcome {
    let params = LevyParams { drift: -1.0, intensity: 0.5, jump_rate: 1.0, rate: 2.0 };
    let kernel = match LevyKernel::closed_form(params) {
        Ok(k) => k,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let points: Vec<f64> = (-6..=6).map(|i| 0.5 * i as f64).collect();
    let width = 0.02;
    let mc = occupation_density_mc(&params, &points, width, 1_000_000, &mut RandomStream::new(31));
    let worst_kernel = points
        .iter()
        .zip(&mc)
        .map(|(w, (est, _))| {
            let exact = kernel.bin_average(w - 0.5 * width, w + 0.5 * width);
            (est - exact).abs() / exact
        })
        .fold(0.0f64, f64::max);

    let m = match price_upper(&levy_model(), &levy_contract(), &Point::new(0.0, vec![0.0]), &levy_basis(1), &SolverOptions::default()) {
        Ok(m) => m,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    runs.keep("levy".into(), &m);
    let n = 100_000;
    let worst_grid = (0..n)
        .map(|i| -10.0 + 30.0 * i as f64 / (n - 1) as f64)
        .map(|x| m.value(0.0, &[x]) - m.gain(&[x]))
        .fold(f64::INFINITY, f64::min);

    let opts = LowerBoundOptions { eps: Some(0.01), n_paths: 20_000, dt: Some(0.01), horizon: Some(3.0) };
    let lb = match lower_bound_mc(&m, &opts, &mut RandomStream::new(32)) {
        Ok(lb) => lb,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let above = m.objective >= lb.estimate - 3.0 * lb.stderr;
    let pass = worst_kernel <= 0.02 && worst_grid >= -m.tol_feas() && above;
    Outcome::new(
        pass,
        format!(
            "kernel vs MC worst {:.2}% on [-3,3]; min(h−g) on [-10,20] = {worst_grid:.2e}; h(0) = {:.5} vs lower bound {:.5} ± {:.5}",
            100.0 * worst_kernel,
            m.objective,
            lb.estimate,
            lb.stderr
        ),
    )
}

fn implied_vol_round_trip() -> Outcome {
    let mut passing = 0;
    let mut lines = Vec::new();
    for seed in 1..=10 {
        let spec = put_basis(seed);
        let target = match price_upper(&put_model(), &put_contract(), &put_anchor(), &spec, &SolverOptions::default()) {
            Ok(m) => m.objective,
            Err(e) => {
                lines.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let mut ok = true;
        let mut fits = Vec::new();
        for sigma0 in [0.1, 0.8] {
            let opts = ImpliedVolOptions { sigma0, ..Default::default() };
            match implied_vol(target, &put_model(), &put_contract(), &put_anchor(), &spec, &SolverOptions::default(), &opts) {
                Ok(r) => {
                    // σ_k is the iterate after k fits
                    let k = r.sigmas.iter().position(|s| (s - 0.4).abs() < 1e-3);
                    ok &= k.is_some_and(|k| k <= 5);
                    fits.push(k.map_or("-".to_string(), |k| k.to_string()));
                }
                Err(e) => {
                    ok = false;
                    fits.push(e.to_string());
                }
            }
        }
        passing += ok as usize;
        lines.push(format!("seed {seed}: fits {}", fits.join("/")));
    }
    Outcome::new(passing >= 9, format!("{passing}/10 seeds; {}", lines.join(", ")))
}

fn greeks_check() -> Outcome {
    let m = match price_upper(&put_model(), &put_contract(), &put_anchor(), &put_basis(1), &SolverOptions::default()) {
        Ok(m) => m,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let mut s = RandomStream::new(41);
    let (mut tested, mut worst, mut monotone) = (0, 0.0f64, true);
    while tested < 100 {
        let t = 0.45 * s.uniform();
        let x = 60.0 + 60.0 * s.uniform();
        if m.value(t, &[x]) - m.gain(&[x]) < 1e-2 {
            continue;
        }
        let Ok(g) = greeks(&m, t, &[x]) else { return Outcome::new(false, "greeks failed") };
        // central differences with one Richardson step
        let h = 1e-3 * x;
        let d = |h: f64| (m.value(t, &[x + h]) - m.value(t, &[x - h])) / (2.0 * h);
        let fd = (4.0 * d(0.5 * h) - d(h)) / 3.0;
        let ht = 1e-3 * t.max(1e-3).min(0.5 - t);
        let th = |h: f64| (m.value(t + h, &[x]) - m.value(t - h, &[x])) / (2.0 * h);
        let fd_theta = (4.0 * th(0.5 * ht) - th(ht)) / 3.0;
        worst = worst
            .max((g.delta[0] - fd).abs() / fd.abs().max(1e-3))
            .max((g.theta - fd_theta).abs() / fd_theta.abs().max(1e-3));
        monotone &= g.delta[0] <= 0.0;
        tested += 1;
    }
    Outcome::new(
        worst <= 1e-6 && monotone,
        format!("worst relative gap {worst:.2e} over {tested} points; delta ≤ 0: {monotone}"),
    )
}

fn solver_properties(runs: &Runs) -> Outcome {
    let mut rng = RandomStream::new(2024);
    let mut lp_ok = true;
    for _ in 0..200 {
        let p = random_instance(&mut rng);
        let Ok(sol) = solve_finite_lp(&p) else {
            lp_ok = false;
            continue;
        };
        lp_ok &= match vertex_oracle(&p) {
            Some(v) => sol.status == LpStatus::Optimal && (sol.objective - v).abs() <= 1e-9 * v.abs().max(1.0),
            None => sol.status == LpStatus::Infeasible,
        };
    }
    let mut history_ok = true;
    let mut feasible_ok = true;
    let mut failures = Vec::new();
    for (i, (name, m)) in runs.majorants.iter().enumerate() {
        if !nondecreasing(&m.solution.history) {
            history_ok = false;
            failures.push(format!("{name}: history"));
        }
        if m.certified {
            let (_, worst) = verify_feasibility(&m.problem, &m.lambda, 100_000, 1000 + i as u64);
            if worst < -m.tol_feas() {
                feasible_ok = false;
                failures.push(format!("{name}: violation {worst:.2e}"));
            }
        }
    }
    let base = runs.majorants.iter().find(|(n, _)| n == "put seed 1").map(|(_, m)| m.problem.clone());
    let homogeneous = match base {
        Some(p) => {
            let mut scaled = p.clone();
            let g = p.gain.clone();
            scaled.gain = Arc::new(move |x: &[f64]| 3.0 * g(x));
            let a = cutting_plane_solve(&p, &mut RandomStream::new(5));
            let b = cutting_plane_solve(&scaled, &mut RandomStream::new(5));
            match (a, b) {
                (Ok(a), Ok(b)) => (b.objective - 3.0 * a.objective).abs() <= 1e-8 * 3.0 * a.objective,
                _ => false,
            }
        }
        None => false,
    };
    Outcome::new(
        lp_ok && history_ok && feasible_ok && homogeneous,
        format!(
            "LP vs vertex oracle {lp_ok}; nondecreasing histories {history_ok}; 10⁵-point verification {feasible_ok} ({} runs); homogeneity {homogeneous}{}",
            runs.majorants.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join(", ")) }
        ),
    )
}

fn lower_bound_sandwich() -> Outcome {
    let m = match price_upper(&put_model(), &put_contract(), &put_anchor(), &put_basis(1), &SolverOptions::default()) {
        Ok(m) => m,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let run = |eps: f64, n: usize| {
        let o = LowerBoundOptions { eps: Some(eps), n_paths: n, dt: Some(1.0 / 500.0), horizon: None };
        lower_bound_mc(&m, &o, &mut RandomStream::new(51))
    };
    let Ok(lb) = run(0.05, 100_000) else { return Outcome::new(false, "simulation failed") };
    let sandwich = lb.estimate <= m.objective + 3.0 * lb.stderr && m.objective - lb.estimate <= 0.2;
    let mut monotone = true;
    let mut prev: Option<(f64, f64)> = None;
    let mut seq = Vec::new();
    for eps in [0.01, 0.1, 1.0] {
        let Ok(r) = run(eps, 20_000) else { return Outcome::new(false, "simulation failed") };
        if let Some((v, se)) = prev {
            monotone &= r.estimate <= v + 3.0 * se.max(r.stderr);
        }
        prev = Some((r.estimate, r.stderr));
        seq.push(format!("{:.4}", r.estimate));
    }
    Outcome::new(
        sandwich && monotone,
        format!(
            "estimate {:.4} ± {:.4} vs objective {:.4}; ε = 0.01, 0.1, 1 → {}",
            lb.estimate,
            lb.stderr,
            m.objective,
            seq.join(", ")
        ),
    )
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let slow = args.iter().any(|a| a == "--include-ignored" || a == "--ignored")
        || std::env::var("AMLSIP_SLOW").is_ok_and(|v| v == "1");
    let mut runs = Runs::default();
    let mut failed = 0;
    let mut report = |name: &str, o: Outcome| {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    };
    report("perpetual one-dimensional example", perpetual_square(&mut runs));
    report("one-asset put table", put_table(&mut runs));
    report("two-asset min-put table", min_put_two_assets(&mut runs));
    report("equal-volatility min-put rows", min_put_equal_vols(&mut runs, slow));
    report("perpetual index put table", index_put(&mut runs));
    report("compound Poisson power payoff", levy(&mut runs));
    report("implied volatility round trip", implied_vol_round_trip());
    report("greeks", greeks_check());
    report("solver properties", solver_properties(&runs));
    report("lower-bound sandwich", lower_bound_sandwich());
    println!("{} of 10 criteria failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
