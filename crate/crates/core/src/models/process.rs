use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cholesky_factor, LowerTriangularFactor};

/// Price or state dynamics under the pricing measure. Every variant carries
/// its discount rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessModel {
    /// `dX = rX dt + σX dW`.
    Gbm1d { rate: f64, vol: f64 },
    /// Correlated geometric Brownian motions with common drift `r`.
    GbmMulti {
        rate: f64,
        vols: Vec<f64>,
        corr: Vec<Vec<f64>>,
    },
    /// Brownian motion on `R^d` with drift `μ` and covariance `Σ`; `rate` is
    /// the discount rate only.
    BmDrift {
        rate: f64,
        drift: Vec<f64>,
        cov: Vec<Vec<f64>>,
    },
    /// `X_t = c t + Σ_{i ≤ N_t} Y_i` with `N` Poisson(λ) and `Y ~ Exp(α)`.
    CppExp {
        rate: f64,
        drift: f64,
        intensity: f64,
        jump_rate: f64,
    },
}

impl ProcessModel {
    pub fn rate(&self) -> f64 {
        match self {
            Self::Gbm1d { rate, .. }
            | Self::GbmMulti { rate, .. }
            | Self::BmDrift { rate, .. }
            | Self::CppExp { rate, .. } => *rate,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Gbm1d { .. } | Self::CppExp { .. } => 1,
            Self::GbmMulti { vols, .. } => vols.len(),
            Self::BmDrift { drift, .. } => drift.len(),
        }
    }

    /// Whether states live in `(0, ∞)^d`.
    pub fn is_price_space(&self) -> bool {
        matches!(self, Self::Gbm1d { .. } | Self::GbmMulti { .. })
    }

    /// Same model with the volatility of a one-asset GBM replaced.
    pub fn with_vol(&self, vol: f64) -> Option<Self> {
        match self {
            Self::Gbm1d { rate, .. } => Some(Self::Gbm1d { rate: *rate, vol }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(self.rate() >= 0.0 && self.rate().is_finite()) {
            return bad("discount rate must be finite and ≥ 0");
        }
        match self {
            Self::Gbm1d { vol, .. } => {
                if !(*vol > 0.0 && vol.is_finite()) {
                    return bad("volatility must be > 0");
                }
            }
            Self::GbmMulti { vols, corr, .. } => {
                if vols.is_empty() || vols.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return bad("volatilities must be > 0");
                }
                check_square(corr, vols.len())?;
                if corr.iter().enumerate().any(|(i, r)| (r[i] - 1.0).abs() > 1e-12) {
                    return bad("correlation matrix needs a unit diagonal");
                }
                cholesky_factor(corr)?;
            }
            Self::BmDrift { drift, cov, .. } => {
                if drift.is_empty() || drift.iter().any(|v| !v.is_finite()) {
                    return bad("drift must be finite");
                }
                check_square(cov, drift.len())?;
                cholesky_factor(cov)?;
            }
            Self::CppExp {
                drift,
                intensity,
                jump_rate,
                ..
            } => {
                if !(*drift < 0.0) {
                    return bad("compound Poisson drift must be < 0");
                }
                if !(*intensity >= 0.0) || !(*jump_rate > 0.0) {
                    return bad("intensity must be ≥ 0 and jump rate > 0");
                }
            }
        }
        Ok(())
    }

    /// Cholesky factor of the correlation (GBM) or covariance (BM) matrix.
    pub fn factor(&self) -> Result<LowerTriangularFactor> {
        match self {
            Self::Gbm1d { .. } | Self::CppExp { .. } => Ok(LowerTriangularFactor::identity(1)),
            Self::GbmMulti { corr, .. } => cholesky_factor(corr),
            Self::BmDrift { cov, .. } => cholesky_factor(cov),
        }
    }

    /// Volatilities of a GBM model.
    pub fn vols(&self) -> Option<Vec<f64>> {
        match self {
            Self::Gbm1d { vol, .. } => Some(vec![*vol]),
            Self::GbmMulti { vols, .. } => Some(vols.clone()),
            _ => None,
        }
    }

    /// Correlation between GBM assets `i` and `j`.
    pub fn corr(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::GbmMulti { corr, .. } => corr[i][j],
            _ => {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether the GBM correlation matrix is the identity.
    pub fn is_uncorrelated(&self) -> bool {
        match self {
            Self::GbmMulti { corr, .. } => corr
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, v)| i == j || *v == 0.0)),
            _ => true,
        }
    }
}

fn check_square(m: &[Vec<f64>], d: usize) -> Result<()> {
    if m.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: m.len() });
    }
    for row in m {
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
    }
    for i in 0..d {
        for j in 0..i {
            if (m[i][j] - m[j][i]).abs() > 1e-12 {
                return Err(Error::InvalidParameter("matrix is not symmetric".into()));
            }
        }
    }
    Ok(())
}
