use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    cholesky_factor, std_normal_cdf, std_normal_inv_cdf, std_normal_pdf, Halton,
    LowerTriangularFactor,
};

/// Discounted down-digital on one asset of a GBM: `e^{-rτ} P(X_T ≤ a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Digital {
    pub asset: usize,
    pub strike: f64,
    pub rate: f64,
    pub vol: f64,
    pub maturity: f64,
    ln_strike: f64,
}

impl Digital {
    pub fn new(asset: usize, strike: f64, rate: f64, vol: f64, maturity: f64) -> Result<Self> {
        if !(strike > 0.0) {
            return Err(Error::InvalidParameter(format!("digital strike {strike} must be > 0")));
        }
        if !(vol > 0.0 && vol.is_finite()) || !(maturity > 0.0) || !(rate >= 0.0) {
            return Err(Error::InvalidParameter("digital needs σ > 0, T > 0, r ≥ 0".into()));
        }
        Ok(Self { asset, strike, rate, vol, maturity, ln_strike: strike.ln() })
    }

    pub fn with_vol(&self, vol: f64) -> Self {
        Self { vol, ..self.clone() }
    }

    /// `d` such that the value is `e^{-rτ} Φ(-d)`.
    #[inline]
    fn d(&self, tau: f64, x: f64) -> f64 {
        (x.ln() - self.ln_strike + (self.rate - 0.5 * self.vol * self.vol) * tau)
            / (self.vol * tau.sqrt())
    }

    #[inline]
    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        let xi = x[self.asset];
        let tau = self.maturity - t;
        if tau <= 0.0 {
            return terminal_below(xi, self.strike);
        }
        let disc = (-self.rate * tau).exp();
        if self.strike.is_infinite() || xi <= 0.0 {
            return disc;
        }
        disc * std_normal_cdf(-self.d(tau, xi))
    }

    /// `∂h/∂x`, `∂²h/∂x²` and `∂h/∂t` with respect to the own asset.
    pub fn partials(&self, t: f64, x: &[f64]) -> Option<(f64, f64, f64)> {
        let xi = x[self.asset];
        let tau = self.maturity - t;
        if tau <= 0.0 || xi <= 0.0 {
            return None;
        }
        let disc = (-self.rate * tau).exp();
        if self.strike.is_infinite() {
            return Some((0.0, 0.0, self.rate * disc));
        }
        let s = self.vol * tau.sqrt();
        let d = self.d(tau, xi);
        let pdf = std_normal_pdf(d);
        let h = disc * std_normal_cdf(-d);
        let dx = -disc * pdf / (xi * s);
        let dxx = disc * pdf / (xi * xi * s) * (d / s + 1.0);
        let l = xi.ln() - self.ln_strike;
        let m = self.rate - 0.5 * self.vol * self.vol;
        let dd_dtau = -l / (2.0 * self.vol * tau.powf(1.5)) + m / (2.0 * self.vol * tau.sqrt());
        let dt = self.rate * h + disc * pdf * dd_dtau;
        Some((dx, dxx, dt))
    }
}

#[inline]
fn terminal_below(x: f64, a: f64) -> f64 {
    if x < a {
        1.0
    } else if x == a {
        0.5
    } else {
        0.0
    }
}

/// Orthant convention of a multi-asset digital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OrthantKind {
    /// Pays when every asset ends below its strike.
    AllBelow,
    /// Pays when at least one asset ends below its strike.
    #[default]
    AnyBelow,
}

/// Discounted multi-asset digital on a correlated GBM.
#[derive(Debug, Clone)]
pub struct MultiDigital {
    pub strikes: Vec<f64>,
    pub rate: f64,
    pub vols: Vec<f64>,
    pub maturity: f64,
    pub kind: OrthantKind,
    /// Cholesky factor of the correlation; `None` for independent assets.
    factor: Option<LowerTriangularFactor>,
    ln_strikes: Vec<f64>,
}

const ORTHANT_POINTS: usize = 4096;

impl MultiDigital {
    pub fn new(
        strikes: Vec<f64>,
        rate: f64,
        vols: Vec<f64>,
        corr: &[Vec<f64>],
        maturity: f64,
        kind: OrthantKind,
    ) -> Result<Self> {
        let d = strikes.len();
        if vols.len() != d || corr.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: vols.len().min(corr.len()) });
        }
        if strikes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidParameter("digital strikes must be > 0".into()));
        }
        if vols.iter().any(|v| !(*v > 0.0)) || !(maturity > 0.0) {
            return Err(Error::InvalidParameter("digital needs σ > 0, T > 0".into()));
        }
        let factor = cholesky_factor(corr)?;
        let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || corr[i][j] == 0.0));
        let ln_strikes = strikes.iter().map(|a| a.ln()).collect();
        Ok(Self {
            strikes,
            rate,
            vols,
            maturity,
            kind,
            factor: (!diagonal).then_some(factor),
            ln_strikes,
        })
    }

    pub fn dim(&self) -> usize {
        self.strikes.len()
    }

    pub fn is_correlated(&self) -> bool {
        self.factor.is_some()
    }

    /// Standardized thresholds: `X_T^j ≤ a_j` iff `Z_j ≤ b_j`.
    fn thresholds(&self, tau: f64, x: &[f64], out: &mut [f64]) {
        let sq = tau.sqrt();
        for j in 0..self.dim() {
            out[j] = if self.strikes[j].is_infinite() || x[j] <= 0.0 {
                f64::INFINITY
            } else {
                let v = self.vols[j];
                -(x[j].ln() - self.ln_strikes[j] + (self.rate - 0.5 * v * v) * tau) / (v * sq)
            };
        }
    }

    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        let tau = self.maturity - t;
        let d = self.dim();
        if tau <= 0.0 {
            let inds = (0..d).map(|j| terminal_below(x[j], self.strikes[j]));
            return match self.kind {
                OrthantKind::AllBelow => inds.product(),
                OrthantKind::AnyBelow => 1.0 - inds.map(|p| 1.0 - p).product::<f64>(),
            };
        }
        let disc = (-self.rate * tau).exp();
        let mut b = [0.0; 32];
        let mut heap;
        let b: &mut [f64] = if d <= 32 {
            &mut b[..d]
        } else {
            heap = vec![0.0; d];
            &mut heap
        };
        self.thresholds(tau, x, b);
        let p = match (&self.factor, self.kind) {
            (None, OrthantKind::AllBelow) => b.iter().map(|v| std_normal_cdf(*v)).product(),
            (None, OrthantKind::AnyBelow) => {
                1.0 - b.iter().map(|v| std_normal_cdf(-*v)).product::<f64>()
            }
            (Some(l), OrthantKind::AllBelow) => orthant_probability(b, l),
            (Some(l), OrthantKind::AnyBelow) => {
                for v in b.iter_mut() {
                    *v = -*v;
                }
                1.0 - orthant_probability(b, l)
            }
        };
        disc * p.clamp(0.0, 1.0)
    }

    /// Spatial gradient for independent assets.
    pub fn gradient(&self, t: f64, x: &[f64]) -> Option<Vec<f64>> {
        let tau = self.maturity - t;
        if tau <= 0.0 || self.factor.is_some() || x.iter().any(|v| *v <= 0.0) {
            return None;
        }
        let d = self.dim();
        let disc = (-self.rate * tau).exp();
        let mut b = vec![0.0; d];
        self.thresholds(tau, x, &mut b);
        let sq = tau.sqrt();
        let mut g = vec![0.0; d];
        for k in 0..d {
            if b[k].is_infinite() {
                continue;
            }
            // derivative of Φ(±b_k) w.r.t. x_k; b_k decreases in x_k
            let db = -1.0 / (x[k] * self.vols[k] * sq);
            let others: f64 = match self.kind {
                OrthantKind::AllBelow => {
                    (0..d).filter(|j| *j != k).map(|j| std_normal_cdf(b[j])).product()
                }
                OrthantKind::AnyBelow => {
                    -(0..d).filter(|j| *j != k).map(|j| std_normal_cdf(-b[j])).product::<f64>()
                }
            };
            let own = match self.kind {
                OrthantKind::AllBelow => std_normal_pdf(b[k]) * db,
                OrthantKind::AnyBelow => -std_normal_pdf(b[k]) * db,
            };
            g[k] = disc * others * own;
        }
        Some(g)
    }
}

fn halton_table(dim: usize) -> Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("halton cache poisoned");
    guard
        .entry(dim)
        .or_insert_with(|| {
            let mut h = Halton::new(dim);
            let mut pts = vec![0.0; dim * ORTHANT_POINTS / 2];
            for chunk in pts.chunks_mut(dim) {
                h.next_into(chunk);
            }
            Arc::new(pts)
        })
        .clone()
}

/// `P(Z ≤ b)` for `Z ~ N(0, LLᵀ)` by separation of variables over a fixed
/// Halton point set.
pub fn orthant_probability(b: &[f64], l: &LowerTriangularFactor) -> f64 {
    let d = b.len();
    if b.iter().any(|v| *v == f64::NEG_INFINITY) {
        return 0.0;
    }
    let e1 = std_normal_cdf(b[0] / l.get(0, 0));
    if d == 1 {
        return e1;
    }
    let pts = halton_table(d - 1);
    let mut y = vec![0.0; d];
    let mut total = 0.0;
    let mut count = 0usize;
    // antithetic pairs: each point is used as w and 1 − w
    for w in pts.chunks(d - 1).take(ORTHANT_POINTS / 2) {
        for flip in [false, true] {
            let mut e = e1;
            let mut f = e1;
            for i in 1..d {
                let u = if flip { 1.0 - w[i - 1] } else { w[i - 1] };
                y[i - 1] = std_normal_inv_cdf((u * e).clamp(1e-300, 1.0 - 1e-16));
                let row = l.row(i);
                let shift: f64 = row[..i].iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
                e = if b[i].is_infinite() { 1.0 } else { std_normal_cdf((b[i] - shift) / row[i]) };
                f *= e;
                if f == 0.0 {
                    break;
                }
            }
            total += f;
            count += 1;
        }
    }
    total / count as f64
}
