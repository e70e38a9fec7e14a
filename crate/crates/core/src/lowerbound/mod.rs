//! Monte Carlo lower bounds from the ε-stopping rule of a solved majorant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{grid_steps, GaussianStepper, ProcessModel};
use crate::numerics::{Halton, RandomStream};
use crate::pricer::{stopping_rule, Majorant};

/// Settings of a lower-bound run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowerBoundOptions {
    /// Stopping slack; `None` means `0.01 · max(1, objective)`.
    pub eps: Option<f64>,
    pub n_paths: usize,
    /// Monitoring step; `None` means horizon / 500.
    pub dt: Option<f64>,
    /// Truncation horizon of perpetual problems; `None` picks one where the
    /// discounted gain is negligible.
    pub horizon: Option<f64>,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        Self { eps: None, n_paths: 100_000, dt: None, horizon: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n_paths: usize,
    pub eps: f64,
    pub dt: f64,
    /// Length of the simulated time window after the anchor time.
    pub horizon: f64,
}

/// Estimates `E[e^{−rτ} g(X_τ)]` for `τ` the first monitoring time at which
/// `g + ε ≥ h*`, or the end of the horizon.
///
/// Paths are simulated in parallel from per-path streams derived from one
/// draw of `stream`, and summed pairwise, so the result does not depend on
/// the thread count.
pub fn lower_bound_mc(
    m: &Majorant,
    opts: &LowerBoundOptions,
    stream: &mut RandomStream,
) -> Result<LowerBoundEstimate> {
    if opts.n_paths == 0 {
        return Err(Error::InvalidParameter("need at least one path".into()));
    }
    let eps = opts.eps.unwrap_or_else(|| crate::pricer::default_epsilon(m));
    let rule = stopping_rule(m, eps)?;
    let t0 = m.anchor.t;
    let horizon = match (m.maturity(), opts.horizon) {
        (Some(mat), _) => mat - t0,
        (None, Some(h)) if h > 0.0 => h,
        (None, Some(h)) => return Err(Error::InvalidParameter(format!("horizon {h} must be > 0"))),
        (None, None) => truncation_horizon(m)?,
    };
    let dt = opts.dt.unwrap_or(horizon / 500.0);
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter("dt must be > 0".into()));
    }
    let (steps, h) = grid_steps(dt, horizon);
    let rate = m.model.rate();
    let base = (stream.uniform() * (1u64 << 53) as f64) as u64;
    let x0 = m.anchor.x.clone();
    let model = &m.model;
    let stepper = match model {
        ProcessModel::CppExp { .. } => None,
        _ => Some(GaussianStepper::new(model, h)?),
    };
    let payoffs: Vec<f64> = (0..opts.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut s = RandomStream::derived(base, i as u64);
            let mut x = x0.clone();
            let mut stepper = stepper.clone();
            let mut cpp = CppStepper::new(model, h, &mut s);
            for k in 0..=steps {
                let t = if k == steps { t0 + horizon } else { t0 + k as f64 * h };
                if k == steps || rule.stop(t, &x) {
                    return (-rate * (t - t0)).exp() * m.gain(&x);
                }
                match (&mut stepper, &mut cpp) {
                    (Some(st), _) => st.step(&mut x, &mut s),
                    (None, Some(c)) => c.step(&mut x, &mut s),
                    (None, None) => unreachable!("every model has a stepper"),
                }
            }
            unreachable!("the loop returns at the last step")
        })
        .collect();
    let n = payoffs.len() as f64;
    let mean = pairwise_sum(&payoffs) / n;
    let sq: Vec<f64> = payoffs.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = if payoffs.len() > 1 { pairwise_sum(&sq) / (n - 1.0) } else { 0.0 };
    Ok(LowerBoundEstimate {
        estimate: mean,
        stderr: (var / n).sqrt(),
        n_paths: opts.n_paths,
        eps,
        dt: h,
        horizon,
    })
}

/// Horizon after which `e^{−rT} · max g` over the search box is at most 0.1%
/// of the objective.
fn truncation_horizon(m: &Majorant) -> Result<f64> {
    let rate = m.model.rate();
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter(
            "perpetual problems without discounting need an explicit horizon".into(),
        ));
    }
    let bx = m.search_box();
    let mut halton = Halton::new(bx.dim());
    let (mut u, mut x) = (vec![0.0; bx.dim()], vec![0.0; bx.dim()]);
    let mut sup = 0.0f64;
    for _ in 0..4096 {
        halton.next_into(&mut u);
        bx.from_unit(&u, &mut x);
        sup = sup.max(m.gain(&x));
    }
    let target = 1e-3 * m.objective.max(1e-12);
    Ok((sup / target).ln().max(0.0) / rate + 1e-12)
}

/// Exact grid stepping of drift plus exponential jumps.
struct CppStepper {
    drift: f64,
    intensity: f64,
    jump_rate: f64,
    h: f64,
    clock: f64,
    next_jump: f64,
}

impl CppStepper {
    fn new(model: &ProcessModel, h: f64, s: &mut RandomStream) -> Option<Self> {
        let ProcessModel::CppExp { drift, intensity, jump_rate, .. } = *model else {
            return None;
        };
        let next_jump = if intensity > 0.0 { s.exponential(intensity) } else { f64::INFINITY };
        Some(Self { drift, intensity, jump_rate, h, clock: 0.0, next_jump })
    }

    fn step(&mut self, x: &mut [f64], s: &mut RandomStream) {
        self.clock += self.h;
        x[0] += self.drift * self.h;
        while self.next_jump <= self.clock {
            x[0] += s.exponential(self.jump_rate);
            self.next_jump += s.exponential(self.intensity);
        }
    }
}

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
