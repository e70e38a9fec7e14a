//! Families of r-harmonic functions used as LSIP columns.

mod digital;
mod european;
mod exchange;
mod exponential;
mod levy;
mod sampler;

use std::sync::Arc;

pub use digital::{orthant_probability, Digital, MultiDigital, OrthantKind};
pub use european::EuropeanPut;
pub use exchange::Exchange;
pub use exponential::{
    ellipsoid_point, ellipsoid_residual, harmonic_exponents, sample_ellipsoid_exponents,
    Exponential,
};
pub use levy::{occupation_density_mc, LevyKernel, LevyParams};
pub use sampler::{sample_parameters, ParamSupport, ParameterSampler};

use crate::error::{Error, Result};
use crate::numerics::RandomStream;

/// Partial derivatives of a basis function at one point. `gamma` holds the
/// diagonal of the spatial Hessian.
#[derive(Debug, Clone, PartialEq)]
pub struct Partials {
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub theta: f64,
}

/// One basis function `h(t, x)`. Perpetual families ignore `t`.
#[derive(Debug, Clone)]
pub enum BasisFunction {
    Digital(Digital),
    MultiDigital(MultiDigital),
    Exchange(Exchange),
    EuropeanPut(EuropeanPut),
    Exponential(Exponential),
    LevyGreen { kernel: Arc<LevyKernel>, shift: f64 },
}

impl BasisFunction {
    #[inline]
    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        match self {
            Self::Digital(h) => h.value(t, x),
            Self::MultiDigital(h) => h.value(t, x),
            Self::Exchange(h) => h.value(t, x),
            Self::EuropeanPut(h) => h.value(t, x),
            Self::Exponential(h) => h.value(x),
            Self::LevyGreen { kernel, shift } => kernel.value(x[0] - shift),
        }
    }

    /// Closed-form partials, when the family has them at `(t, x)`.
    pub fn partials(&self, t: f64, x: &[f64]) -> Option<Partials> {
        let d = x.len();
        match self {
            Self::Digital(h) => {
                let (dx, dxx, dt) = h.partials(t, x)?;
                let mut p = Partials { delta: vec![0.0; d], gamma: vec![0.0; d], theta: dt };
                p.delta[h.asset] = dx;
                p.gamma[h.asset] = dxx;
                Some(p)
            }
            Self::Exchange(h) => {
                let (g, hs, th) = h.partials(t, x)?;
                let mut p = Partials { delta: vec![0.0; d], gamma: vec![0.0; d], theta: th };
                p.delta[h.long] = g[0];
                p.delta[h.short] = g[1];
                p.gamma[h.long] = hs[0];
                p.gamma[h.short] = hs[1];
                Some(p)
            }
            Self::EuropeanPut(h) => {
                let (dx, dxx, dt) = h.partials(t, x)?;
                let mut p = Partials { delta: vec![0.0; d], gamma: vec![0.0; d], theta: dt };
                p.delta[0] = dx;
                p.gamma[0] = dxx;
                Some(p)
            }
            Self::Exponential(h) => {
                let v = h.value(x);
                Some(Partials {
                    delta: h.coef.iter().map(|a| a * v).collect(),
                    gamma: h.coef.iter().map(|a| a * a * v).collect(),
                    theta: 0.0,
                })
            }
            Self::MultiDigital(_) | Self::LevyGreen { .. } => None,
        }
    }

    /// Maturity of time-dependent families.
    pub fn maturity(&self) -> Option<f64> {
        match self {
            Self::Digital(h) => Some(h.maturity),
            Self::MultiDigital(h) => Some(h.maturity),
            Self::Exchange(h) => Some(h.maturity),
            Self::EuropeanPut(h) => Some(h.maturity),
            Self::Exponential(_) | Self::LevyGreen { .. } => None,
        }
    }

    /// Coordinates `(asset, level)` where the terminal limit jumps.
    pub fn terminal_kinks(&self) -> Vec<(usize, f64)> {
        match self {
            Self::Digital(h) if h.strike.is_finite() => vec![(h.asset, h.strike)],
            Self::MultiDigital(h) => h
                .strikes
                .iter()
                .enumerate()
                .filter(|(_, a)| a.is_finite())
                .map(|(j, a)| (j, *a))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Spatial points where a perpetual function jumps.
    pub fn jumps(&self) -> Vec<f64> {
        match self {
            Self::LevyGreen { shift, .. } => vec![*shift],
            _ => Vec::new(),
        }
    }

    /// Same function under a different GBM volatility, for one-asset families.
    pub fn with_vol(&self, vol: f64) -> Option<Self> {
        match self {
            Self::Digital(h) => Some(Self::Digital(h.with_vol(vol))),
            Self::EuropeanPut(h) => h.with_vol(vol).map(Self::EuropeanPut),
            _ => None,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Digital(_) => "digital",
            Self::MultiDigital(_) => "multi_digital",
            Self::Exchange(_) => "exchange",
            Self::EuropeanPut(_) => "european_put",
            Self::Exponential(_) => "exponential",
            Self::LevyGreen { .. } => "levy_green",
        }
    }

    /// The family parameter `a`.
    pub fn parameter(&self) -> Vec<f64> {
        match self {
            Self::Digital(h) => vec![h.strike],
            Self::MultiDigital(h) => h.strikes.clone(),
            Self::Exchange(h) => vec![h.long as f64, h.short as f64],
            Self::EuropeanPut(h) => vec![h.strike],
            Self::Exponential(h) => h.coef.clone(),
            Self::LevyGreen { shift, .. } => vec![*shift],
        }
    }
}

/// The two minimal r-harmonic exponentials of a one-dimensional Brownian
/// motion with drift: increasing first, decreasing second.
pub fn make_harmonic_1d(rate: f64, drift: f64, vol: f64) -> Result<(BasisFunction, BasisFunction)> {
    let (up, down) = harmonic_exponents(rate, drift, vol)?;
    Ok((
        BasisFunction::Exponential(Exponential { coef: vec![up] }),
        BasisFunction::Exponential(Exponential { coef: vec![down] }),
    ))
}

pub fn make_bs_digital(strike: f64, rate: f64, vol: f64, maturity: f64) -> Result<BasisFunction> {
    Ok(BasisFunction::Digital(Digital::new(0, strike, rate, vol, maturity)?))
}

pub fn make_multi_digital(
    strikes: Vec<f64>,
    rate: f64,
    vols: Vec<f64>,
    corr: &[Vec<f64>],
    maturity: f64,
    kind: OrthantKind,
) -> Result<BasisFunction> {
    Ok(BasisFunction::MultiDigital(MultiDigital::new(strikes, rate, vols, corr, maturity, kind)?))
}

pub fn make_exchange_basis(
    pair: (usize, usize),
    vol_i: f64,
    vol_j: f64,
    rho: f64,
    maturity: f64,
) -> Result<BasisFunction> {
    Ok(BasisFunction::Exchange(Exchange::new(pair.0, pair.1, vol_i, vol_j, rho, maturity)?))
}

/// The strike integral of the any-below digitals up to `strike`.
pub fn make_european_put(strike: f64, rate: f64, vols: Vec<f64>, maturity: f64) -> Result<BasisFunction> {
    Ok(BasisFunction::EuropeanPut(EuropeanPut::new(strike, rate, vols, maturity)?))
}

pub fn sample_ellipsoid_harmonics(
    cov: &[Vec<f64>],
    drift: &[f64],
    rate: f64,
    n: usize,
    stream: &mut RandomStream,
) -> Result<Vec<BasisFunction>> {
    Ok(sample_ellipsoid_exponents(cov, drift, rate, n, stream)?
        .into_iter()
        .map(|coef| BasisFunction::Exponential(Exponential { coef }))
        .collect())
}

pub fn make_levy_green_basis(params: LevyParams, shift: f64) -> Result<BasisFunction> {
    if !shift.is_finite() {
        return Err(Error::InvalidParameter("Green basis shift must be finite".into()));
    }
    Ok(BasisFunction::LevyGreen { kernel: LevyKernel::cached(params)?, shift })
}
