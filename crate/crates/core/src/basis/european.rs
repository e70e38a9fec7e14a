use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, std_normal_pdf};

/// Discounted European put on the minimum of independent GBM assets,
/// `e^{-rτ} E[(K − min_i X_T^i)⁺]`.
///
/// This is the strike integral `∫_0^K h_a da` of the any-below digitals with
/// equal strikes, so it lies in the cone they generate, and its terminal
/// value is the put payoff itself. One asset uses the Black-Scholes formula;
/// several assets integrate over the strike in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct EuropeanPut {
    pub strike: f64,
    pub rate: f64,
    pub vols: Vec<f64>,
    pub maturity: f64,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, 8 points.
const GL_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

impl EuropeanPut {
    pub fn new(strike: f64, rate: f64, vols: Vec<f64>, maturity: f64) -> Result<Self> {
        if !(strike > 0.0 && strike.is_finite()) {
            return Err(Error::InvalidParameter("put strike must be finite and > 0".into()));
        }
        if vols.is_empty() || vols.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("put needs σ > 0".into()));
        }
        if !(maturity > 0.0) || !(rate >= 0.0) {
            return Err(Error::InvalidParameter("put needs T > 0, r ≥ 0".into()));
        }
        Ok(Self { strike, rate, vols, maturity })
    }

    pub fn with_vol(&self, vol: f64) -> Option<Self> {
        (self.vols.len() == 1).then(|| Self { vols: vec![vol], ..self.clone() })
    }

    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        let tau = self.maturity - t;
        let k = self.strike;
        if tau <= 0.0 {
            let m = x.iter().copied().fold(f64::INFINITY, f64::min);
            return (k - m).max(0.0);
        }
        let disc = (-self.rate * tau).exp();
        if x.iter().any(|v| *v <= 0.0) {
            return disc * k;
        }
        if let [s] = self.vols[..] {
            let (d1, d2) = self.d12(tau, x[0], s);
            return (k * disc * std_normal_cdf(-d2) - x[0] * std_normal_cdf(-d1)).max(0.0);
        }
        disc * self.strike_integral(tau, x)
    }

    fn d12(&self, tau: f64, x: f64, vol: f64) -> (f64, f64) {
        let s = vol * tau.sqrt();
        let d1 = ((x / self.strike).ln() + (self.rate + 0.5 * vol * vol) * tau) / s;
        (d1, d1 - s)
    }

    /// `∫_0^K P(min X_T < a) da` by composite Gauss-Legendre in `u = ln a`,
    /// with panels no wider than one terminal standard deviation where the
    /// integrand bends.
    fn strike_integral(&self, tau: f64, x: &[f64]) -> f64 {
        let sq = tau.sqrt();
        let centres: Vec<(f64, f64)> = x
            .iter()
            .zip(&self.vols)
            .map(|(xi, v)| (xi.ln() + (self.rate - 0.5 * v * v) * tau, v * sq))
            .collect();
        let top = self.strike.ln();
        let bottom = centres.iter().map(|(c, s)| c - 10.0 * s).fold(f64::INFINITY, f64::min);
        if top <= bottom {
            return 0.0;
        }
        let mut breaks = vec![bottom, top];
        for (c, s) in &centres {
            for j in -10..=10 {
                breaks.push(c + j as f64 * s);
            }
        }
        breaks.retain(|u| *u >= bottom && *u <= top);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let f = |u: f64| {
            let all_above: f64 = centres.iter().map(|(c, s)| std_normal_cdf((c - u) / s)).product();
            u.exp() * (1.0 - all_above)
        };
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let pieces = ((w[1] - w[0]) / 1.0).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / pieces as f64;
            for p in 0..pieces {
                let (a, b) = (w[0] + p as f64 * h, w[0] + (p + 1) as f64 * h);
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                let mut s = 0.0;
                for (xg, wg) in GL_X.iter().zip(&GL_W) {
                    s += wg * (f(mid - half * xg) + f(mid + half * xg));
                }
                total += half * s;
            }
        }
        total
    }

    /// `∂h/∂x`, `∂²h/∂x²` and `∂h/∂t` for the one-asset put.
    pub fn partials(&self, t: f64, x: &[f64]) -> Option<(f64, f64, f64)> {
        let tau = self.maturity - t;
        let [vol] = self.vols[..] else { return None };
        if tau <= 0.0 || x[0] <= 0.0 {
            return None;
        }
        let (d1, d2) = self.d12(tau, x[0], vol);
        let disc = (-self.rate * tau).exp();
        let pdf = std_normal_pdf(d1);
        let delta = -std_normal_cdf(-d1);
        let gamma = pdf / (x[0] * vol * tau.sqrt());
        let theta = -x[0] * pdf * vol / (2.0 * tau.sqrt())
            + self.rate * self.strike * disc * std_normal_cdf(-d2);
        Some((delta, gamma, theta))
    }
}
