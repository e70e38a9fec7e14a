//! Finite linear programs `min cᵀλ  s.t.  Aλ ≥ b, λ ≥ 0`.

use super::simplex::{PricingRule, RevisedSimplex, SimplexStatus};
use crate::error::{Error, Result};

/// One finite LP: `rows[j]·λ ≥ rhs[j]` for each row, `λ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLP {
    pub c: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub lambda: Vec<f64>,
    pub objective: f64,
}

impl FiniteLP {
    pub fn new(c: Vec<f64>) -> Self {
        Self {
            c,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.c.len();
        if self.rows.len() != self.rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                got: self.rhs.len(),
            });
        }
        if let Some(row) = self.rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        let finite = self.c.iter().chain(self.rhs.iter()).chain(self.rows.iter().flatten());
        if finite.clone().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite LP entry".into()));
        }
        if self.c.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidParameter("negative objective coefficient".into()));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        self.rhs
            .iter()
            .chain(self.c.iter())
            .fold(1.0f64, |a, v| a.max(v.abs()))
    }
}

/// Solves a [`FiniteLP`] with the two-phase revised simplex method under
/// Bland's rule.
///
/// Phase one minimises the sum of artificial variables on
/// `Aλ - s = b`; a positive optimum means no `λ ≥ 0` satisfies the rows.
pub fn solve_finite_lp(p: &FiniteLP) -> Result<LpSolution> {
    p.validate()?;
    let n = p.c.len();
    let k = p.rows.len();
    let scale = p.scale();

    // Rows are flipped so that every right-hand side is nonnegative.
    let sign: Vec<f64> = p.rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();
    let b: Vec<f64> = p.rhs.iter().zip(&sign).map(|(v, s)| v * s).collect();
    let mut lp = RevisedSimplex::new(b);
    for i in 0..n {
        let col: Vec<f64> = (0..k).map(|j| sign[j] * p.rows[j][i]).collect();
        lp.add_column(col, 0.0);
    }
    let mut basis = vec![usize::MAX; k];
    for j in 0..k {
        let mut col = vec![0.0; k];
        col[j] = -sign[j];
        let idx = lp.add_column(col, 0.0);
        if sign[j] < 0.0 {
            basis[j] = idx;
        }
    }
    let mut artificials = Vec::new();
    for j in 0..k {
        if basis[j] == usize::MAX {
            let mut col = vec![0.0; k];
            col[j] = 1.0;
            let idx = lp.add_column(col, 1.0);
            basis[j] = idx;
            artificials.push(idx);
        }
    }
    let iter_cap = 50 * (n + 2 * k + 10);
    if k > 0 {
        lp.set_basis(basis)?;
        if !artificials.is_empty() {
            match lp.optimize(PricingRule::Bland, iter_cap)? {
                SimplexStatus::Optimal => {}
                SimplexStatus::Unbounded(_) => {
                    return Err(Error::Internal("phase one cannot be unbounded".into()));
                }
            }
            if lp.objective() > 1e-9 * scale {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    lambda: vec![0.0; n],
                    objective: f64::NAN,
                });
            }
            // Drive zero-level artificials out of the basis where possible.
            for &a in &artificials {
                lp.ban(a);
                lp.set_cost(a, 0.0);
                if let Some(r) = lp.row_of(a) {
                    if let Some(q) = (0..n + k).find(|&j| lp.tableau_entry(r, j).abs() > 1e-9) {
                        lp.pivot(r, q)?;
                    }
                }
            }
        }
        for i in 0..n {
            lp.set_cost(i, p.c[i]);
        }
        match lp.optimize(PricingRule::Bland, iter_cap)? {
            SimplexStatus::Optimal => {}
            SimplexStatus::Unbounded(_) => {
                return Err(Error::Internal("LP with c ≥ 0 and λ ≥ 0 reported unbounded".into()));
            }
        }
    }
    let x = lp.solution();
    let lambda: Vec<f64> = x[..n].to_vec();
    let objective = lambda.iter().zip(&p.c).map(|(l, c)| l * c).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        lambda,
        objective,
    })
}

/// Incremental form used by the cutting-plane loop.
///
/// Holds the dual `max bᵀy  s.t.  Aᵀy ≤ c, y ≥ 0`; each new primal row is a
/// new dual column, so the previous basis stays feasible and re-optimisation
/// starts warm. The primal `λ` are read off the dual's simplex multipliers.
/// Primal infeasibility shows up as dual unboundedness.
#[derive(Debug, Clone)]
pub struct IncrementalLp {
    c: Vec<f64>,
    /// Each dual row `i` is divided by `c_i` so every right-hand side is one.
    row_scale: Vec<f64>,
    engine: RevisedSimplex,
    n: usize,
    rows: usize,
}

impl IncrementalLp {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter("objective must be finite and ≥ 0".into()));
        }
        let n = c.len();
        // rows with vanishing cost are scaled by one instead
        let row_scale: Vec<f64> = c.iter().map(|v| if *v > 0.0 { 1.0 / v } else { 1.0 }).collect();
        let b = c.iter().zip(&row_scale).map(|(v, s)| v * s).collect();
        let mut engine = RevisedSimplex::new(b);
        for i in 0..n {
            let mut col = vec![0.0; n];
            col[i] = 1.0;
            engine.add_column(col, 0.0);
        }
        engine.set_basis((0..n).collect())?;
        Ok(Self { c, row_scale, engine, n, rows: 0 })
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    /// Adds the primal row `row·λ ≥ rhs`.
    pub fn add_row(&mut self, row: &[f64], rhs: f64) {
        debug_assert_eq!(row.len(), self.n);
        let col: Vec<f64> = row.iter().zip(&self.row_scale).map(|(v, r)| v * r).collect();
        let scale = col.iter().fold(rhs.abs(), |a, v| a.max(v.abs()));
        let s = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        self.engine.add_column(col.iter().map(|v| v * s).collect(), -rhs * s);
        self.rows += 1;
    }

    pub fn solve(&mut self) -> Result<LpSolution> {
        let cap = 200 * (self.n + self.rows + 10);
        match self.engine.optimize(PricingRule::DantzigWithBlandFallback, cap)? {
            SimplexStatus::Optimal => {
                let lambda: Vec<f64> = self
                    .engine
                    .duals()
                    .iter()
                    .zip(&self.row_scale)
                    .map(|(p, r)| (-p * r).max(0.0))
                    .collect();
                let objective = lambda.iter().zip(&self.c).map(|(l, c)| l * c).sum();
                Ok(LpSolution {
                    status: LpStatus::Optimal,
                    lambda,
                    objective,
                })
            }
            SimplexStatus::Unbounded(_) => Ok(LpSolution {
                status: LpStatus::Infeasible,
                lambda: vec![0.0; self.n],
                objective: f64::NAN,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bound() {
        let mut p = FiniteLP::new(vec![1.0]);
        p.push_row(vec![1.0], 1.0);
        let s = solve_finite_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.lambda[0] - 1.0).abs() < 1e-12);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_row_infeasible() {
        let mut p = FiniteLP::new(vec![1.0]);
        p.push_row(vec![0.0], 1.0);
        assert_eq!(solve_finite_lp(&p).unwrap().status, LpStatus::Infeasible);
        let mut inc = IncrementalLp::new(vec![1.0]).unwrap();
        inc.add_row(&[0.0], 1.0);
        assert_eq!(inc.solve().unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn incremental_matches_cold_solve() {
        let c = vec![1.0, 2.0, 0.5];
        let rows = vec![
            (vec![1.0, 1.0, 0.0], 2.0),
            (vec![0.0, 1.0, 1.0], 1.0),
            (vec![1.0, 0.0, 3.0], 3.0),
            (vec![0.5, 0.5, 0.5], 1.2),
        ];
        let mut cold = FiniteLP::new(c.clone());
        let mut warm = IncrementalLp::new(c).unwrap();
        for (row, rhs) in rows {
            cold.push_row(row.clone(), rhs);
            warm.add_row(&row, rhs);
            let a = solve_finite_lp(&cold).unwrap();
            let b = warm.solve().unwrap();
            assert!((a.objective - b.objective).abs() < 1e-10, "{a:?} {b:?}");
        }
    }

    #[test]
    fn empty_rows_give_zero() {
        let p = FiniteLP::new(vec![1.0, 3.0]);
        let s = solve_finite_lp(&p).unwrap();
        assert_eq!(s.objective, 0.0);
    }
}
