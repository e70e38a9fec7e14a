use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, std_normal_pdf};

/// European option to exchange asset `short` for asset `long`, priced in
/// closed form. Undiscounted: both assets are martingales after discounting.
#[derive(Debug, Clone, PartialEq)]
pub struct Exchange {
    pub long: usize,
    pub short: usize,
    pub vol_hat: f64,
    pub maturity: f64,
}

impl Exchange {
    pub fn new(long: usize, short: usize, vol_long: f64, vol_short: f64, rho: f64, maturity: f64) -> Result<Self> {
        if long == short {
            return Err(Error::InvalidParameter("exchange needs two distinct assets".into()));
        }
        if !(vol_long > 0.0 && vol_short > 0.0) || !(maturity > 0.0) || !(-1.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter("exchange needs σ > 0, |ρ| ≤ 1, T > 0".into()));
        }
        let var = vol_long * vol_long - 2.0 * rho * vol_long * vol_short + vol_short * vol_short;
        Ok(Self { long, short, vol_hat: var.max(0.0).sqrt(), maturity })
    }

    fn ds(&self, tau: f64, xi: f64, xj: f64) -> (f64, f64) {
        let s = self.vol_hat * tau.sqrt();
        let d1 = ((xi / xj).ln() + 0.5 * s * s) / s;
        (d1, d1 - s)
    }

    #[inline]
    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        let (xi, xj) = (x[self.long], x[self.short]);
        let tau = self.maturity - t;
        if tau <= 0.0 || self.vol_hat < 1e-12 || xi <= 0.0 || xj <= 0.0 {
            return (xi - xj).max(0.0);
        }
        let (d1, d2) = self.ds(tau, xi, xj);
        (xi * std_normal_cdf(d1) - xj * std_normal_cdf(d2)).max(0.0)
    }

    /// Gradient, diagonal second derivatives (as sparse pairs over
    /// `(long, short)`) and time derivative.
    pub fn partials(&self, t: f64, x: &[f64]) -> Option<([f64; 2], [f64; 2], f64)> {
        let (xi, xj) = (x[self.long], x[self.short]);
        let tau = self.maturity - t;
        if tau <= 0.0 || self.vol_hat < 1e-12 || xi <= 0.0 || xj <= 0.0 {
            return None;
        }
        let s = self.vol_hat * tau.sqrt();
        let (d1, d2) = self.ds(tau, xi, xj);
        let pdf = std_normal_pdf(d1);
        let grad = [std_normal_cdf(d1), -std_normal_cdf(d2)];
        let hess = [pdf / (xi * s), xi * pdf / (xj * xj * s)];
        let theta = -xi * pdf * self.vol_hat / (2.0 * tau.sqrt());
        Some((grad, hess, theta))
    }
}
