use crate::error::{Error, Result};
use crate::models::ProcessModel;
use crate::numerics::{LowerTriangularFactor, RandomStream};

/// A simulated trajectory on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Exact jump times (compound Poisson models only).
    pub jump_times: Vec<f64>,
}

impl SamplePath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn terminal(&self) -> &[f64] {
        self.states.last().map(|s| s.as_slice()).unwrap_or(&[])
    }
}

/// Number of steps and the effective step for covering `[0, horizon]`.
pub fn grid_steps(dt: f64, horizon: f64) -> (usize, f64) {
    let n = ((horizon / dt) - 1e-9).ceil().max(1.0) as usize;
    (n, horizon / n as f64)
}

/// Exact one-step transition for Gaussian-driven models, with per-step
/// constants precomputed.
#[derive(Debug, Clone)]
pub struct GaussianStepper {
    dim: usize,
    log_space: bool,
    drift: Vec<f64>,
    factor: LowerTriangularFactor,
    scale: Vec<f64>,
    z: Vec<f64>,
}

impl GaussianStepper {
    pub fn new(model: &ProcessModel, dt: f64) -> Result<Self> {
        model.validate()?;
        let sq = dt.sqrt();
        match model {
            ProcessModel::Gbm1d { rate, vol } => Ok(Self {
                dim: 1,
                log_space: true,
                drift: vec![(rate - 0.5 * vol * vol) * dt],
                factor: LowerTriangularFactor::identity(1),
                scale: vec![vol * sq],
                z: vec![0.0],
            }),
            ProcessModel::GbmMulti { rate, vols, .. } => Ok(Self {
                dim: vols.len(),
                log_space: true,
                drift: vols.iter().map(|v| (rate - 0.5 * v * v) * dt).collect(),
                factor: model.factor()?,
                scale: vols.iter().map(|v| v * sq).collect(),
                z: vec![0.0; vols.len()],
            }),
            ProcessModel::BmDrift { drift, .. } => Ok(Self {
                dim: drift.len(),
                log_space: false,
                drift: drift.iter().map(|m| m * dt).collect(),
                factor: model.factor()?,
                scale: vec![sq; drift.len()],
                z: vec![0.0; drift.len()],
            }),
            ProcessModel::CppExp { .. } => Err(Error::InvalidParameter(
                "compound Poisson model has no Gaussian stepper".into(),
            )),
        }
    }

    /// Advances `x` in place by one step.
    pub fn step(&mut self, x: &mut [f64], stream: &mut RandomStream) {
        for z in self.z.iter_mut() {
            *z = stream.normal();
        }
        for i in 0..self.dim {
            let w: f64 = self.factor.row(i).iter().zip(&self.z).map(|(l, z)| l * z).sum();
            let inc = self.drift[i] + self.scale[i] * w;
            if self.log_space {
                x[i] *= inc.exp();
            } else {
                x[i] += inc;
            }
        }
    }
}

/// Exact lognormal (or Gaussian, for drifted Brownian motion) stepping on a
/// uniform grid over `[0, horizon]`.
pub fn simulate_gbm_path(
    model: &ProcessModel,
    x0: &[f64],
    dt: f64,
    horizon: f64,
    stream: &mut RandomStream,
) -> Result<SamplePath> {
    if x0.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: x0.len() });
    }
    if !(dt > 0.0 && horizon > 0.0) {
        return Err(Error::InvalidParameter("dt and horizon must be > 0".into()));
    }
    if model.is_price_space() && x0.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("initial prices must be > 0".into()));
    }
    let (n, h) = grid_steps(dt, horizon);
    let mut stepper = GaussianStepper::new(model, h)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut x = x0.to_vec();
    times.push(0.0);
    states.push(x.clone());
    for k in 1..=n {
        stepper.step(&mut x, stream);
        times.push(if k == n { horizon } else { k as f64 * h });
        states.push(x.clone());
    }
    Ok(SamplePath { times, states, jump_times: Vec::new() })
}

/// Event-driven simulation of drift plus exponential upward jumps. States are
/// recorded on the uniform grid and just after every jump.
pub fn simulate_cpp_path(
    model: &ProcessModel,
    x0: f64,
    dt: f64,
    horizon: f64,
    stream: &mut RandomStream,
) -> Result<SamplePath> {
    let ProcessModel::CppExp { drift, intensity, jump_rate, .. } = *model else {
        return Err(Error::InvalidParameter("expected a compound Poisson model".into()));
    };
    if !(dt > 0.0 && horizon > 0.0) {
        return Err(Error::InvalidParameter("dt and horizon must be > 0".into()));
    }
    let (n, h) = grid_steps(dt, horizon);
    let mut jump_times = Vec::new();
    let mut jump_sizes = Vec::new();
    if intensity > 0.0 {
        let mut t = stream.exponential(intensity);
        while t <= horizon {
            jump_times.push(t);
            jump_sizes.push(stream.exponential(jump_rate));
            t += stream.exponential(intensity);
        }
    }
    let mut times = Vec::with_capacity(n + 1 + jump_times.len());
    let mut states = Vec::with_capacity(n + 1 + jump_times.len());
    let mut jumped = 0.0;
    let mut next_jump = 0;
    for k in 0..=n {
        let tg = if k == n { horizon } else { k as f64 * h };
        while next_jump < jump_times.len() && jump_times[next_jump] < tg {
            let tj = jump_times[next_jump];
            jumped += jump_sizes[next_jump];
            times.push(tj);
            states.push(vec![x0 + drift * tj + jumped]);
            next_jump += 1;
        }
        while next_jump < jump_times.len() && jump_times[next_jump] == tg {
            jumped += jump_sizes[next_jump];
            next_jump += 1;
        }
        times.push(tg);
        states.push(vec![x0 + drift * tg + jumped]);
    }
    Ok(SamplePath { times, states, jump_times })
}

/// Dispatches to the exact simulator for the model.
pub fn simulate_path(
    model: &ProcessModel,
    x0: &[f64],
    dt: f64,
    horizon: f64,
    stream: &mut RandomStream,
) -> Result<SamplePath> {
    match model {
        ProcessModel::CppExp { .. } => simulate_cpp_path(model, x0[0], dt, horizon, stream),
        _ => simulate_gbm_path(model, x0, dt, horizon, stream),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_se(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (var / n).sqrt())
    }

    #[test]
    fn zero_vol_is_deterministic() {
        let m = ProcessModel::BmDrift { rate: 0.0, drift: vec![0.3], cov: vec![vec![1e-300]] };
        let mut s = RandomStream::new(1);
        let p = simulate_gbm_path(&m, &[1.0], 0.1, 1.0, &mut s).unwrap();
        assert_eq!(p.len(), 11);
        assert!((p.terminal()[0] - 1.3).abs() < 1e-12);
    }

    #[test]
    fn gbm_martingale_and_log_variance() {
        let (r, sigma, t) = (0.06, 0.4, 0.5);
        let m = ProcessModel::Gbm1d { rate: r, vol: sigma };
        for dt in [t, t / 10.0, t / 100.0] {
            let mut disc = Vec::new();
            let mut logs = Vec::new();
            let mut s = RandomStream::new(42);
            for _ in 0..20_000 {
                let p = simulate_gbm_path(&m, &[100.0], dt, t, &mut s).unwrap();
                let xt = p.terminal()[0];
                disc.push((-r * t).exp() * xt);
                logs.push((xt / 100.0).ln());
            }
            let (mu, se) = mean_se(&disc);
            assert!((mu - 100.0).abs() < 4.0 * se, "dt {dt}: {mu} ± {se}");
            let (lm, _) = mean_se(&logs);
            let sq: Vec<f64> = logs.iter().map(|l| (l - lm).powi(2)).collect();
            let (var, var_se) = mean_se(&sq);
            assert!((var - sigma * sigma * t).abs() < 4.0 * var_se, "{var} ± {var_se}");
        }
    }

    #[test]
    fn correlated_gbm_log_covariance() {
        let m = ProcessModel::GbmMulti {
            rate: 0.0,
            vols: vec![0.3, 0.5],
            corr: vec![vec![1.0, 0.6], vec![0.6, 1.0]],
        };
        let mut s = RandomStream::new(3);
        let mut prods = Vec::new();
        for _ in 0..40_000 {
            let p = simulate_gbm_path(&m, &[1.0, 1.0], 1.0, 1.0, &mut s).unwrap();
            let x = p.terminal();
            prods.push((x[0].ln() + 0.045) * (x[1].ln() + 0.125));
        }
        let (c, se) = mean_se(&prods);
        assert!((c - 0.09).abs() < 4.0 * se, "{c} ± {se}");
    }

    #[test]
    fn cpp_moments() {
        let (c, lam, alpha, t) = (-1.0, 0.5, 1.0, 2.0);
        let m = ProcessModel::CppExp { rate: 2.0, drift: c, intensity: lam, jump_rate: alpha };
        let mut s = RandomStream::new(9);
        let mut ends = Vec::new();
        let mut counts = Vec::new();
        for _ in 0..50_000 {
            let p = simulate_cpp_path(&m, 0.0, 0.1, t, &mut s).unwrap();
            assert!(p.times.windows(2).all(|w| w[0] <= w[1]));
            ends.push(p.terminal()[0]);
            counts.push(p.jump_times.len() as f64);
        }
        let (mu, se) = mean_se(&ends);
        assert!((mu - (c * t + lam * t / alpha)).abs() < 4.0 * se);
        let (n, nse) = mean_se(&counts);
        assert!((n - lam * t).abs() < 4.0 * nse);

        let pure = ProcessModel::CppExp { rate: 2.0, drift: c, intensity: 0.0, jump_rate: alpha };
        let p = simulate_cpp_path(&pure, 1.0, 0.5, t, &mut s).unwrap();
        for (ti, xi) in p.times.iter().zip(&p.states) {
            assert!((xi[0] - (1.0 + c * ti)).abs() < 1e-12);
        }
    }
}
