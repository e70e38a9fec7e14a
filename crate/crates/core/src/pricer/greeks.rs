use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pricer::Majorant;

/// First and second spatial derivatives (Hessian diagonal) and time decay of
/// the majorant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Greeks {
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub theta: f64,
    /// Whether closed-form partials were used.
    pub analytic: bool,
}

/// Greeks of the majorant at `(t, x)`, analytic where every active basis
/// function supplies partials and central differences otherwise.
pub fn greeks(m: &Majorant, t: f64, x: &[f64]) -> Result<Greeks> {
    m.check_point(t, x)?;
    if let Some(mat) = m.maturity() {
        if t >= mat {
            return Err(Error::Domain("Greeks are undefined at maturity".into()));
        }
    }
    if let Some(p) = m.partials(t, x) {
        return Ok(Greeks { delta: p.delta, gamma: p.gamma, theta: p.theta, analytic: true });
    }
    Ok(finite_difference_greeks(m, t, x))
}

/// Central-difference Greeks with steps `1e-4·max(1, |x_k|)` and `1e-4·T`.
pub fn finite_difference_greeks(m: &Majorant, t: f64, x: &[f64]) -> Greeks {
    let d = x.len();
    let mut delta = vec![0.0; d];
    let mut gamma = vec![0.0; d];
    let h0 = m.value(t, x);
    let mut y = x.to_vec();
    for k in 0..d {
        let mut h = 1e-4 * x[k].abs().max(1.0);
        if m.model.is_price_space() {
            h = h.min(0.5 * x[k]);
        }
        y[k] = x[k] + h;
        let up = m.value(t, &y);
        y[k] = x[k] - h;
        let dn = m.value(t, &y);
        y[k] = x[k];
        delta[k] = (up - dn) / (2.0 * h);
        gamma[k] = (up - 2.0 * h0 + dn) / (h * h);
    }
    let theta = match m.maturity() {
        Some(mat) => {
            let h = (1e-4 * mat).min(0.5 * (mat - t)).min(t.max(0.0)).max(0.0);
            if h > 0.0 {
                (m.value(t + h, x) - m.value(t - h, x)) / (2.0 * h)
            } else {
                let h = (1e-4 * mat).min(0.5 * (mat - t));
                (m.value(t + h, x) - h0) / h
            }
        }
        None => 0.0,
    };
    Greeks { delta, gamma, theta, analytic: false }
}
