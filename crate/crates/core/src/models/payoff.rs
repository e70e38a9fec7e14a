use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gain functions `g(x) ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payoff {
    /// `(K − x)⁺` on one asset.
    Put { strike: f64 },
    /// `(K − min_i x_i)⁺`.
    MinPut { strike: f64 },
    /// `(K − Σ α_i e^{x_i})⁺` for log-price states.
    IndexPut { strike: f64, weights: Vec<f64> },
    /// `(x⁺)^γ`.
    Power { exponent: f64 },
    /// `x²`.
    Square,
}

impl Payoff {
    /// Evaluates the gain, checking the state dimension.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.len() });
            }
        } else if x.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(self.value(x))
    }

    /// Unchecked evaluation.
    #[inline]
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Self::Put { strike } => (strike - x[0]).max(0.0),
            Self::MinPut { strike } => {
                let m = x.iter().copied().fold(f64::INFINITY, f64::min);
                (strike - m).max(0.0)
            }
            Self::IndexPut { strike, weights } => {
                let s: f64 = weights.iter().zip(x).map(|(w, v)| w * v.exp()).sum();
                (strike - s).max(0.0)
            }
            Self::Power { exponent } => x[0].max(0.0).powf(*exponent),
            Self::Square => x[0] * x[0],
        }
    }

    /// Required state dimension, when fixed by the payoff.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Put { .. } | Self::Power { .. } | Self::Square => Some(1),
            Self::IndexPut { weights, .. } => Some(weights.len()),
            Self::MinPut { .. } => None,
        }
    }

    pub fn strike(&self) -> Option<f64> {
        match self {
            Self::Put { strike } | Self::MinPut { strike } | Self::IndexPut { strike, .. } => {
                Some(*strike)
            }
            _ => None,
        }
    }

    /// Whether the gain vanishes for large prices and is bounded by the strike.
    pub fn is_put_type(&self) -> bool {
        self.strike().is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        match self {
            Self::Put { strike } | Self::MinPut { strike } => {
                if !(*strike > 0.0 && strike.is_finite()) {
                    return bad("strike must be > 0");
                }
            }
            Self::IndexPut { strike, weights } => {
                if !(*strike > 0.0 && strike.is_finite()) {
                    return bad("strike must be > 0");
                }
                if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                    return bad("index weights must be > 0");
                }
            }
            Self::Power { exponent } => {
                if !(*exponent >= 1.0 && exponent.is_finite()) {
                    return bad("power exponent must be ≥ 1");
                }
            }
            Self::Square => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(Payoff::MinPut { strike: 100.0 }.eval(&[80.0, 120.0]).unwrap(), 20.0);
        assert_eq!(Payoff::Power { exponent: 2.5 }.eval(&[-1.0]).unwrap(), 0.0);
        let idx = Payoff::IndexPut { strike: 10.0, weights: vec![1.0, 1.0] };
        let v = idx.eval(&[0.7, 0.2]).unwrap();
        assert!((v - 6.764).abs() < 1e-3, "{v}");
        assert!(matches!(idx.eval(&[0.7]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn nonnegative_and_continuous() {
        let payoffs = [
            Payoff::Put { strike: 100.0 },
            Payoff::MinPut { strike: 100.0 },
            Payoff::IndexPut { strike: 10.0, weights: vec![1.0, 2.0] },
            Payoff::Power { exponent: 2.5 },
            Payoff::Square,
        ];
        let mut rng = crate::numerics::RandomStream::new(5);
        for p in &payoffs {
            for _ in 0..1000 {
                let x: Vec<f64> = (0..2).map(|_| rng.uniform_in(-3.0, 150.0)).collect();
                let x = &x[..p.dim().unwrap_or(2)];
                let g = p.value(x);
                assert!(g >= 0.0);
                let y: Vec<f64> = x.iter().map(|v| v + 1e-9).collect();
                assert!((p.value(&y) - g).abs() < 1e-5 * (1.0 + g));
            }
        }
    }
}
