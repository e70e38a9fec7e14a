//! Dense revised simplex on `min cᵀx, Ax = b, x ≥ 0`.
//!
//! The basis inverse is kept explicitly and refactored periodically from the
//! basis columns. Pricing is Bland's rule, or Dantzig's rule that falls back
//! to Bland's after a run of degenerate pivots.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PricingRule {
    /// Smallest-index entering and leaving variables; never cycles.
    Bland,
    /// Most negative reduced cost; switches to Bland on degenerate stalls.
    DantzigWithBlandFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    /// The given column has a negative reduced cost and no blocking row.
    Unbounded(usize),
}

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-10;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_RUN_LIMIT: usize = 30;

#[derive(Debug, Clone)]
pub struct RevisedSimplex {
    m: usize,
    cols: Vec<Vec<f64>>,
    cost: Vec<f64>,
    banned: Vec<bool>,
    b: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    since_refactor: usize,
    pivots: usize,
}

impl RevisedSimplex {
    pub fn new(b: Vec<f64>) -> Self {
        let m = b.len();
        Self {
            m,
            cols: Vec::new(),
            cost: Vec::new(),
            banned: Vec::new(),
            b,
            basis: Vec::new(),
            in_basis: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            since_refactor: 0,
            pivots: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    pub fn add_column(&mut self, col: Vec<f64>, cost: f64) -> usize {
        debug_assert_eq!(col.len(), self.m);
        self.cols.push(col);
        self.cost.push(cost);
        self.banned.push(false);
        self.in_basis.push(false);
        self.cols.len() - 1
    }

    pub fn set_cost(&mut self, j: usize, cost: f64) {
        self.cost[j] = cost;
    }

    /// Excludes a column from ever entering the basis.
    pub fn ban(&mut self, j: usize) {
        self.banned[j] = true;
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Installs a starting basis; it must be nonsingular and primal feasible.
    pub fn set_basis(&mut self, basis: Vec<usize>) -> Result<()> {
        if basis.len() != self.m {
            return Err(Error::Internal("basis size does not match row count".into()));
        }
        for f in self.in_basis.iter_mut() {
            *f = false;
        }
        for &j in &basis {
            self.in_basis[j] = true;
        }
        self.basis = basis;
        self.refactor()?;
        if self.xb.iter().any(|&v| v < -1e-9) {
            return Err(Error::Internal("starting basis is not primal feasible".into()));
        }
        Ok(())
    }

    /// Recomputes `B⁻¹` by Gauss-Jordan elimination with partial pivoting.
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                a[i * m + k] = self.cols[j][i];
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let piv_row = (col..m)
                .max_by(|&p, &q| a[p * m + col].abs().total_cmp(&a[q * m + col].abs()))
                .unwrap();
            let piv = a[piv_row * m + col];
            if piv.abs() < 1e-13 {
                return Err(Error::Internal("singular basis".into()));
            }
            if piv_row != col {
                for k in 0..m {
                    a.swap(piv_row * m + k, col * m + k);
                    inv.swap(piv_row * m + k, col * m + k);
                }
            }
            let inv_piv = 1.0 / piv;
            for k in 0..m {
                a[col * m + k] *= inv_piv;
                inv[col * m + k] *= inv_piv;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let factor = a[r * m + col];
                if factor != 0.0 {
                    for k in 0..m {
                        a[r * m + k] -= factor * a[col * m + k];
                        inv[r * m + k] -= factor * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        self.xb = self.binv_times(&self.b);
        for v in self.xb.iter_mut() {
            if v.abs() < 1e-13 {
                *v = 0.0;
            }
        }
        self.since_refactor = 0;
        Ok(())
    }

    fn binv_times(&self, v: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|i| {
                self.binv[i * m..(i + 1) * m]
                    .iter()
                    .zip(v)
                    .map(|(p, q)| p * q)
                    .sum()
            })
            .collect()
    }

    /// Simplex multipliers `π = c_Bᵀ B⁻¹`.
    pub fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut pi = vec![0.0; m];
        for (r, &j) in self.basis.iter().enumerate() {
            let c = self.cost[j];
            if c != 0.0 {
                for (k, p) in pi.iter_mut().enumerate() {
                    *p += c * self.binv[r * m + k];
                }
            }
        }
        pi
    }

    fn reduced_cost(&self, pi: &[f64], j: usize) -> f64 {
        self.cost[j] - pi.iter().zip(&self.cols[j]).map(|(p, a)| p * a).sum::<f64>()
    }

    /// Basic row of column `j` in the current basis, if any.
    pub fn row_of(&self, j: usize) -> Option<usize> {
        if !self.in_basis[j] {
            return None;
        }
        self.basis.iter().position(|&b| b == j)
    }

    /// Entry `(B⁻¹ a_j)_r`.
    pub fn tableau_entry(&self, r: usize, j: usize) -> f64 {
        let m = self.m;
        self.binv[r * m..(r + 1) * m]
            .iter()
            .zip(&self.cols[j])
            .map(|(p, a)| p * a)
            .sum()
    }

    /// Pivots column `q` into the basis at row `r`.
    pub fn pivot(&mut self, r: usize, q: usize) -> Result<()> {
        let u = self.binv_times(&self.cols[q]);
        self.apply_pivot(r, q, &u)
    }

    fn apply_pivot(&mut self, r: usize, q: usize, u: &[f64]) -> Result<()> {
        let m = self.m;
        let ur = u[r];
        if ur.abs() < 1e-14 {
            return Err(Error::Internal("zero pivot".into()));
        }
        let theta = self.xb[r].max(0.0) / ur;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * u[i];
                if self.xb[i].abs() < 1e-13 {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        let inv_ur = 1.0 / ur;
        for k in 0..m {
            self.binv[r * m + k] *= inv_ur;
        }
        let (head, tail) = self.binv.split_at_mut(r * m);
        let (pivot_row, rest) = tail.split_at_mut(m);
        for i in 0..m {
            if i == r || u[i] == 0.0 {
                continue;
            }
            let row = if i < r {
                &mut head[i * m..(i + 1) * m]
            } else {
                let off = (i - r - 1) * m;
                &mut rest[off..off + m]
            };
            let f = u[i];
            for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                *x -= f * p;
            }
        }
        let leaving = self.basis[r];
        self.in_basis[leaving] = false;
        self.in_basis[q] = true;
        self.basis[r] = q;
        self.pivots += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor()?;
        }
        Ok(())
    }

    /// Textbook ratio test, ties broken by smallest basic index.
    fn bland_ratio(&self, u: &[f64], piv_tol: f64) -> Option<(usize, f64)> {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if u[i] > piv_tol {
                let ratio = self.xb[i].max(0.0) / u[i];
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        if (ratio - best).abs() <= 1e-12 * (1.0 + best.abs()) {
                            self.basis[i] < self.basis[r]
                        } else {
                            ratio < best
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        leave
    }

    /// Two-pass Harris ratio test: among rows whose ratio is within the
    /// feasibility slack of the minimum, take the largest pivot.
    fn harris_ratio(&self, u: &[f64], piv_tol: f64) -> Option<(usize, f64)> {
        let slack = FEAS_TOL * self.b.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let mut bound = f64::INFINITY;
        for i in 0..self.m {
            if u[i] > piv_tol {
                bound = bound.min((self.xb[i].max(0.0) + slack) / u[i]);
            }
        }
        if bound.is_infinite() {
            return None;
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if u[i] > piv_tol {
                let ratio = self.xb[i].max(0.0) / u[i];
                if ratio <= bound && leave.map_or(true, |(r, _)| u[i] > u[r]) {
                    leave = Some((i, ratio));
                }
            }
        }
        leave
    }

    /// Runs primal simplex iterations from the current feasible basis.
    pub fn optimize(&mut self, rule: PricingRule, max_iter: usize) -> Result<SimplexStatus> {
        let cost_scale = self.cost.iter().fold(1.0f64, |acc, c| acc.max(c.abs()));
        let opt_tol = 1e-11 * cost_scale;
        let mut degenerate_run = 0usize;
        for _ in 0..max_iter {
            let bland = rule == PricingRule::Bland || degenerate_run >= DEGENERATE_RUN_LIMIT;
            let pi = self.duals();
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || self.banned[j] {
                    continue;
                }
                let d = self.reduced_cost(&pi, j);
                if d < -opt_tol {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    // Normalise by column length so scale differences between
                    // columns do not dominate the choice.
                    let norm = self.cols[j].iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
                    let score = d / norm;
                    if entering.map_or(true, |(_, s)| score < s) {
                        entering = Some((j, score));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(SimplexStatus::Optimal);
            };
            let u = self.binv_times(&self.cols[q]);
            let umax = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let piv_tol = PIVOT_TOL * umax.max(1.0);
            let leave = if bland {
                self.bland_ratio(&u, piv_tol)
            } else {
                self.harris_ratio(&u, piv_tol)
            };
            let Some((r, ratio)) = leave else {
                return Ok(SimplexStatus::Unbounded(q));
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.apply_pivot(r, q, &u)?;
        }
        Err(Error::Internal(format!("simplex iteration limit {max_iter} reached")))
    }

    /// Current value of every column variable.
    pub fn solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.cols.len()];
        for (r, &j) in self.basis.iter().enumerate() {
            x[j] = self.xb[r].max(0.0);
        }
        x
    }

    pub fn objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .map(|(&j, &v)| self.cost[j] * v)
            .sum()
    }
}
