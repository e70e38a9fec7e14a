mod path;
mod payoff;
mod process;

pub use path::{
    grid_steps, simulate_cpp_path, simulate_gbm_path, simulate_path, GaussianStepper, SamplePath,
};
pub use payoff::Payoff;
pub use process::ProcessModel;

use crate::error::Result;

/// Checked payoff evaluation.
pub fn eval_payoff(payoff: &Payoff, x: &[f64]) -> Result<f64> {
    payoff.eval(x)
}
