use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::Payoff;
use crate::numerics::grid_golden_minima;
use crate::pricer::Majorant;

/// Where the stopping region lies relative to the continuation region on a
/// one-dimensional section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopSide {
    /// Stop at low states (puts).
    Below,
    /// Stop at high states (power gains).
    Above,
    /// Stop outside an interval around the anchor (symmetric gains).
    Outside,
}

impl StopSide {
    pub fn for_payoff(payoff: &Payoff) -> Self {
        match payoff {
            Payoff::Put { .. } | Payoff::MinPut { .. } | Payoff::IndexPut { .. } => Self::Below,
            Payoff::Power { .. } => Self::Above,
            Payoff::Square => Self::Outside,
        }
    }
}

/// Boundary at one time. The continuation region on the section is the
/// interval `(lower, upper)`; `None` means no boundary on that side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub t: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl BoundaryPoint {
    /// The boundary level for one-sided regions.
    pub fn level(&self, side: StopSide) -> Option<f64> {
        match side {
            StopSide::Below => self.lower,
            StopSide::Above => self.upper,
            StopSide::Outside => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub side: StopSide,
    pub tol_bnd: f64,
    pub points: Vec<BoundaryPoint>,
}

impl BoundaryCurve {
    /// Times at which an expected boundary was not found.
    pub fn missing(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| match self.side {
                StopSide::Below => p.lower.is_none(),
                StopSide::Above => p.upper.is_none(),
                StopSide::Outside => p.lower.is_none() || p.upper.is_none(),
            })
            .map(|p| p.t)
            .collect()
    }
}

/// Line through `base` along coordinate `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub axis: usize,
    pub base: Vec<f64>,
}

/// Number of scan points per time.
pub const BOUNDARY_SCAN: usize = 512;

/// Exercise boundary of a one-dimensional majorant.
pub fn exercise_boundary(m: &Majorant, t_grid: &[f64]) -> Result<BoundaryCurve> {
    if m.dim() != 1 {
        return Err(Error::InvalidParameter("multi-asset boundaries need a section".into()));
    }
    let section = Section { axis: 0, base: m.anchor.x.clone() };
    exercise_boundary_on(m, t_grid, &section, BOUNDARY_SCAN)
}

/// Exercise boundary along a section, scanning `n_scan` points per time.
///
/// A point counts as a zero of `h* − g` when the gap is at most `tol_bnd`.
/// Crossings of that threshold are bisected to `tol_bnd`; touching zeros are
/// located by golden-section refinement of the scan minima.
pub fn exercise_boundary_on(
    m: &Majorant,
    t_grid: &[f64],
    section: &Section,
    n_scan: usize,
) -> Result<BoundaryCurve> {
    if section.base.len() != m.dim() || section.axis >= m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: section.base.len() });
    }
    let side = StopSide::for_payoff(&m.contract.payoff);
    let scale = m.contract.payoff.strike().unwrap_or(1.0).max(1.0);
    let tol_bnd = 1e-6 * scale;
    let bx = m.search_box();
    let lo = bx.lo[section.axis];
    let hi = match m.contract.payoff {
        Payoff::Put { strike } | Payoff::MinPut { strike } => strike.min(bx.hi[section.axis]),
        _ => bx.hi[section.axis],
    };
    let centre = m.anchor.x[section.axis].clamp(lo, hi);
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut x = section.base.clone();
        m.check_point(t, &x)?;
        let mut gap = |s: f64| {
            x[section.axis] = s;
            m.value(t, &x) - m.gain(&x)
        };
        let zeros = zero_set(&mut gap, lo, hi, n_scan, tol_bnd);
        let below = |c: f64| zeros.iter().copied().filter(|s| *s <= c).fold(None, max_opt);
        let above = |c: f64| zeros.iter().copied().filter(|s| *s >= c).fold(None, min_opt);
        let (lower, upper) = match side {
            StopSide::Below => (below(hi), None),
            StopSide::Above => (None, above(lo)),
            StopSide::Outside => (below(centre), above(centre)),
        };
        let refine = |b: Option<f64>, dir: f64, gap: &mut dyn FnMut(f64) -> f64| {
            b.map(|b| push_to_edge(gap, b, dir, (hi - lo) / (n_scan - 1) as f64, lo, hi, tol_bnd))
        };
        let lower = refine(lower, 1.0, &mut gap);
        let upper = refine(upper, -1.0, &mut gap);
        points.push(BoundaryPoint { t, lower, upper });
    }
    Ok(BoundaryCurve { side, tol_bnd, points })
}

fn max_opt(acc: Option<f64>, s: f64) -> Option<f64> {
    Some(acc.map_or(s, |a| a.max(s)))
}

fn min_opt(acc: Option<f64>, s: f64) -> Option<f64> {
    Some(acc.map_or(s, |a| a.min(s)))
}

/// Scan points and refined local minima where the gap is within `tol`.
fn zero_set(gap: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, n: usize, tol: f64) -> Vec<f64> {
    let n = n.max(3);
    let h = (hi - lo) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n)
        .map(|i| lo + h * i as f64)
        .filter(|s| gap(*s) <= tol)
        .collect();
    let minima = grid_golden_minima(&mut *gap, lo, hi, n, 64, 1e-3 * tol);
    out.extend(minima.into_iter().filter(|(_, v)| *v <= 10.0 * tol).map(|(s, _)| s));
    out
}

/// From a zero `b`, moves towards the continuation side (`dir`) up to the
/// last point whose gap is within `tol`, by bisection inside one scan step.
fn push_to_edge(
    gap: &mut dyn FnMut(f64) -> f64,
    b: f64,
    dir: f64,
    step: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> f64 {
    let out = (b + dir * step).clamp(lo, hi);
    if gap(out) <= tol {
        return b;
    }
    let (mut inside, mut outside) = (b, out);
    while (outside - inside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if gap(mid) <= tol {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}
