use crate::error::{Error, Result};
use crate::pricer::Majorant;

/// Stop as soon as the gain comes within `eps` of the majorant.
#[derive(Debug, Clone, Copy)]
pub struct StoppingRule<'a> {
    pub majorant: &'a Majorant,
    pub eps: f64,
}

impl StoppingRule<'_> {
    #[inline]
    pub fn stop(&self, t: f64, x: &[f64]) -> bool {
        self.majorant.gain(x) + self.eps >= self.majorant.value(t, x)
    }
}

pub fn stopping_rule(m: &Majorant, eps: f64) -> Result<StoppingRule<'_>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("ε = {eps} must be > 0")));
    }
    Ok(StoppingRule { majorant: m, eps })
}

/// `0.01 · max(1, objective)`.
pub fn default_epsilon(m: &Majorant) -> f64 {
    0.01 * m.objective.max(1.0)
}
