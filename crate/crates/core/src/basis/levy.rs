use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RandomStream;

/// Compound Poisson process with negative drift and `Exp(α)` upward jumps,
/// killed at rate `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyParams {
    pub drift: f64,
    pub intensity: f64,
    pub jump_rate: f64,
    pub rate: f64,
}

impl LevyParams {
    /// `α + λ/c`, positive when the undiscounted process is transient.
    pub fn rho(&self) -> f64 {
        self.jump_rate + self.intensity / self.drift
    }
}

/// Resolvent density in shifted form. `k(w)` is the discounted occupation
/// density at level `0` for the process started at `w`; the basis function
/// with shift `a` is `x ↦ k(x − a)`.
///
/// `k(w) = C₋ e^{|β₋| w}` for `w ≤ 0` and `C₊ e^{−β₊ w}` for `w > 0`, where
/// `β₊ ≥ 0 > β₋` solve `|c|β² + (|c|α − λ − r)β − rα = 0`. At `r = 0` the right
/// branch is flat.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyKernel {
    pub params: LevyParams,
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl LevyKernel {
    /// Closed-form constants without validation.
    pub fn closed_form(params: LevyParams) -> Result<Self> {
        let LevyParams { drift, intensity, jump_rate, rate } = params;
        if !(drift < 0.0) || !(intensity >= 0.0) || !(jump_rate > 0.0) || !(rate >= 0.0) {
            return Err(Error::InvalidKernel("need c < 0, λ ≥ 0, α > 0, r ≥ 0".into()));
        }
        if !(params.rho() > 0.0) {
            return Err(Error::InvalidKernel(format!("ρ = α + λ/c = {} must be > 0", params.rho())));
        }
        let s = -drift;
        let b = s * jump_rate - intensity - rate;
        let root = (b * b + 4.0 * s * rate * jump_rate).sqrt();
        let (beta_plus, beta_minus) = if b > 0.0 {
            // stable form for the small root when r ≈ 0
            let big = (-b - root) / (2.0 * s);
            (-rate * jump_rate / (s * big), big)
        } else {
            let big = (-b + root) / (2.0 * s);
            (big, -rate * jump_rate / (s * big))
        };
        let gap = s * (beta_plus - beta_minus);
        Ok(Self {
            params,
            beta_plus,
            beta_minus,
            c_plus: (jump_rate + beta_plus) / gap,
            c_minus: (jump_rate + beta_minus) / gap,
        })
    }

    #[inline]
    pub fn value(&self, w: f64) -> f64 {
        if w <= 0.0 {
            self.c_minus * (-self.beta_minus * w).exp()
        } else {
            self.c_plus * (-self.beta_plus * w).exp()
        }
    }

    /// Mean of `k` over `[lo, hi]`.
    pub fn bin_average(&self, lo: f64, hi: f64) -> f64 {
        let seg = |c: f64, beta: f64, a: f64, b: f64| {
            if b <= a {
                0.0
            } else if beta.abs() < 1e-14 {
                c * (b - a)
            } else {
                c * ((-beta * a).exp() - (-beta * b).exp()) / beta
            }
        };
        let left = seg(self.c_minus, self.beta_minus, lo, hi.min(0.0));
        let right = seg(self.c_plus, self.beta_plus, lo.max(0.0), hi);
        (left + right) / (hi - lo)
    }

    /// Closed form checked against the Monte Carlo oracle at a few points;
    /// fails with `InvalidKernel` above 5% relative disagreement.
    pub fn validated(params: LevyParams, paths: usize, seed: u64) -> Result<Self> {
        let k = Self::closed_form(params)?;
        let points = [-0.5, -0.1, 0.25, 1.0];
        let width = 0.05;
        let mut stream = RandomStream::new(seed);
        let mc = occupation_density_mc(&params, &points, width, paths, &mut stream);
        for (w, (est, se)) in points.iter().zip(mc) {
            let exact = k.bin_average(w - 0.5 * width, w + 0.5 * width);
            let err = (est - exact).abs();
            if err > 0.05 * exact && err > 4.0 * se {
                return Err(Error::InvalidKernel(format!(
                    "k({w}) closed form {exact:.5} vs Monte Carlo {est:.5} ± {se:.5}"
                )));
            }
        }
        Ok(k)
    }

    /// Validated kernel, shared across calls with equal parameters.
    pub fn cached(params: LevyParams) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<Vec<Arc<LevyKernel>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
        let mut guard = cache.lock().expect("kernel cache poisoned");
        if let Some(k) = guard.iter().find(|k| k.params == params) {
            return Ok(k.clone());
        }
        let k = Arc::new(Self::validated(params, 100_000, 0x1e5f)?);
        guard.push(k.clone());
        Ok(k)
    }
}

/// Monte Carlo estimate of `k(w)` (bin averages of width `width`) with
/// standard errors. Paths start at `w` and accumulate discounted time spent
/// near level `0`; equivalently they start at `0` and watch level `−w`.
pub fn occupation_density_mc(
    params: &LevyParams,
    points: &[f64],
    width: f64,
    paths: usize,
    stream: &mut RandomStream,
) -> Vec<(f64, f64)> {
    let LevyParams { drift, intensity, jump_rate, rate } = *params;
    let speed = -drift;
    let levels: Vec<f64> = points.iter().map(|w| -w).collect();
    let lowest = levels.iter().copied().fold(f64::INFINITY, f64::min) - width;
    // below this the chance of climbing back is negligible
    let decay = if rate > 0.0 {
        LevyKernel::closed_form(*params).map(|k| -k.beta_minus).unwrap_or(params.rho())
    } else {
        params.rho()
    };
    let floor = lowest - 40.0 / decay.max(1e-3);
    let mut sums = vec![0.0; points.len()];
    let mut squares = vec![0.0; points.len()];
    let mut acc = vec![0.0; points.len()];
    for _ in 0..paths {
        acc.iter_mut().for_each(|a| *a = 0.0);
        let (mut t, mut y) = (0.0f64, 0.0f64);
        loop {
            let dur = if intensity > 0.0 { stream.exponential(intensity) } else { f64::INFINITY };
            for (k, z) in levels.iter().enumerate() {
                let (zlo, zhi) = (z - 0.5 * width, z + 0.5 * width);
                let s0 = ((y - zhi) / speed).max(0.0);
                let s1 = ((y - zlo) / speed).min(dur);
                if s1 > s0 {
                    acc[k] += if rate > 0.0 {
                        ((-rate * (t + s0)).exp() - (-rate * (t + s1)).exp()) / rate
                    } else {
                        s1 - s0
                    };
                }
            }
            if dur.is_infinite() {
                break;
            }
            t += dur;
            y += drift * dur + stream.exponential(jump_rate);
            if y < floor || (rate > 0.0 && rate * t > 30.0) {
                break;
            }
        }
        for k in 0..points.len() {
            let v = acc[k] / width;
            sums[k] += v;
            squares[k] += v * v;
        }
    }
    let n = paths as f64;
    sums.iter()
        .zip(&squares)
        .map(|(s, q)| {
            let m = s / n;
            (m, ((q / n - m * m).max(0.0) / n).sqrt())
        })
        .collect()
}
