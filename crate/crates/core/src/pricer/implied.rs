use serde::{Deserialize, Serialize};

use crate::basis::BasisFunction;
use crate::error::{Error, Result};
use crate::models::ProcessModel;
use crate::pricer::{price_upper, BasisSpec, Contract, Point, SolverOptions};

/// Settings of the implied-volatility iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImpliedVolOptions {
    pub sigma0: f64,
    pub max_outer: usize,
    /// Stop when successive volatilities differ by less than this.
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for ImpliedVolOptions {
    fn default() -> Self {
        Self { sigma0: 0.3, max_outer: 10, tol: 1e-4, lo: 0.01, hi: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpliedVolResult {
    /// `σ_0, σ_1, …`; the last entry is the estimate.
    pub sigmas: Vec<f64>,
    /// Majorant objective at each fitted volatility.
    pub objectives: Vec<f64>,
    pub converged: bool,
}

impl ImpliedVolResult {
    pub fn sigma(&self) -> f64 {
        *self.sigmas.last().expect("at least the start value")
    }

    /// Number of majorant fits performed.
    pub fn outer_iterations(&self) -> usize {
        self.objectives.len()
    }
}

/// Volatility at which the majorant price matches `target`.
///
/// Each outer step fits a majorant at the current volatility, then keeps the
/// coefficients and strikes fixed and bisects the closed-form basis in the
/// volatility alone.
pub fn implied_vol(
    target: f64,
    template: &ProcessModel,
    contract: &Contract,
    anchor: &Point,
    spec: &BasisSpec,
    solver: &SolverOptions,
    opts: &ImpliedVolOptions,
) -> Result<ImpliedVolResult> {
    let intrinsic = contract.payoff.eval(&anchor.x)?;
    if !(target > intrinsic) {
        return Err(Error::InvalidParameter(format!(
            "target {target} must exceed the intrinsic value {intrinsic}"
        )));
    }
    if !(opts.lo < opts.hi) || !(opts.lo..=opts.hi).contains(&opts.sigma0) {
        return Err(Error::InvalidParameter("σ₀ must lie in the bisection range".into()));
    }
    let mut sigmas = vec![opts.sigma0];
    let mut objectives = Vec::new();
    for _ in 0..opts.max_outer {
        let sigma = *sigmas.last().unwrap();
        let model = template
            .with_vol(sigma)
            .ok_or_else(|| Error::InvalidParameter("implied volatility needs a one-asset GBM".into()))?;
        let m = price_upper(&model, contract, anchor, spec, solver)?;
        objectives.push(m.objective);
        let active: Vec<(f64, &BasisFunction)> = m
            .lambda
            .iter()
            .zip(&m.basis)
            .filter(|(l, _)| **l > 0.0)
            .map(|(l, h)| (*l, h))
            .collect();
        let price = |s: f64| -> Result<f64> {
            let mut v = 0.0;
            for (l, h) in &active {
                let h = h.with_vol(s).ok_or_else(|| {
                    Error::InvalidParameter("basis has no volatility parameter".into())
                })?;
                v += l * h.value(anchor.t, &anchor.x);
            }
            Ok(v - target)
        };
        let next = bisect(price, opts.lo, opts.hi, 1e-10)?;
        sigmas.push(next);
        if (next - sigma).abs() < opts.tol {
            return Ok(ImpliedVolResult { sigmas, objectives, converged: true });
        }
    }
    Ok(ImpliedVolResult { sigmas, objectives, converged: false })
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo * f_hi > 0.0 {
        return Err(Error::RootNotBracketed { f_lo, f_hi });
    }
    let rising = f_hi > f_lo;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
