use std::fmt;
use std::sync::Arc;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::basis::BasisFunction;
use crate::error::{Error, Result};
use crate::lsip::{IncrementalLp, LpStatus};
use crate::numerics::{
    grid_golden_minima, multistart_minima, Halton, NelderMeadOptions, RandomStream, SearchBox,
};

/// Gain as a function of the spatial state.
pub type GainFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Tuning of the cutting-plane loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LsipOptions {
    /// Feasibility tolerance; `None` means `1e-6 · max(1, gain scale)`.
    pub tol_feas: Option<f64>,
    pub max_cuts: usize,
    /// Scan points of the multistart search per round.
    pub n_starts: usize,
    /// Grid size of the one-dimensional search.
    pub n_grid: usize,
    /// Violated points added per round.
    pub cuts_per_round: usize,
    /// Size of the post-certification check; violations found there become
    /// cuts and the loop resumes.
    pub verify_points: usize,
}

impl Default for LsipOptions {
    fn default() -> Self {
        Self {
            tol_feas: None,
            max_cuts: 400,
            n_starts: 512,
            n_grid: 512,
            cuts_per_round: 1,
            verify_points: 16384,
        }
    }
}

/// `min Σλ_i h_i(anchor)` subject to `Σλ_i h_i(z) ≥ g(z)` on the domain.
///
/// Points are `z = x` for perpetual problems and `z = (t, x)` when a horizon
/// is set. The last time of the box (normally the horizon) is searched
/// separately as a face.
#[derive(Clone)]
pub struct LsipProblem {
    pub basis: Vec<BasisFunction>,
    pub gain: GainFn,
    pub horizon: Option<f64>,
    pub domain: SearchBox,
    pub anchor: Vec<f64>,
    pub options: LsipOptions,
}

impl fmt::Debug for LsipProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LsipProblem")
            .field("basis", &self.basis.len())
            .field("horizon", &self.horizon)
            .field("domain", &self.domain)
            .field("anchor", &self.anchor)
            .field("options", &self.options)
            .finish()
    }
}

impl LsipProblem {
    #[inline]
    fn split<'a>(&self, z: &'a [f64]) -> (f64, &'a [f64]) {
        match self.horizon {
            Some(_) => (z[0], &z[1..]),
            None => (0.0, z),
        }
    }

    pub fn basis_row(&self, z: &[f64]) -> Vec<f64> {
        let (t, x) = self.split(z);
        self.basis.iter().map(|h| h.value(t, x)).collect()
    }

    pub fn gain_at(&self, z: &[f64]) -> f64 {
        (self.gain)(self.split(z).1)
    }

    /// `Σλ_i h_i(z) − g(z)` over the nonzero coefficients.
    pub fn violation(&self, lambda: &[f64], z: &[f64]) -> f64 {
        let (t, x) = self.split(z);
        let h: f64 = self
            .basis
            .iter()
            .zip(lambda)
            .filter(|(_, l)| **l > 0.0)
            .map(|(b, l)| l * b.value(t, x))
            .sum();
        h - (self.gain)(x)
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis.is_empty() {
            return Err(Error::InvalidParameter("basis is empty".into()));
        }
        let dim = self.domain.dim();
        if self.anchor.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.anchor.len() });
        }
        if !self.domain.contains(&self.anchor) {
            return Err(Error::Domain(format!("anchor {:?} outside the search box", self.anchor)));
        }
        if let Some(t) = self.horizon {
            if !(t > 0.0) || self.domain.hi[0] > t + 1e-12 {
                return Err(Error::InvalidParameter("time range must lie within the horizon".into()));
            }
        }
        if let Some(i) = self.basis_row(&self.anchor).iter().position(|v| !(*v > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "basis function {i} vanishes at the anchor"
            )));
        }
        Ok(())
    }

    /// Time at search coordinate `u ∈ [0, 1]`, with `u = 0` the last time.
    /// Diffusive solutions vary on the scale `√(T − t)`, so the search runs
    /// uniformly in `u = √((T − t)/(T − t_0))`.
    fn time_of(&self, u: f64) -> f64 {
        let (lo, hi) = (self.domain.lo[0], self.domain.hi[0]);
        hi - (hi - lo) * u * u
    }

    /// Box of the terminal face in space coordinates.
    fn face_box(&self) -> Option<SearchBox> {
        self.horizon.map(|_| {
            SearchBox::new(self.domain.lo[1..].to_vec(), self.domain.hi[1..].to_vec())
        })
    }
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Certified,
    MaxCuts,
    DuplicateCut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantSolution {
    pub lambda: Vec<f64>,
    pub objective: f64,
    pub cuts: Vec<Vec<f64>>,
    pub history: Vec<f64>,
    pub final_violation: f64,
    pub tol_feas: f64,
    pub termination: Termination,
}

impl MajorantSolution {
    pub fn certified(&self) -> bool {
        self.termination == Termination::Certified
    }

    /// Converts a non-certified outcome into `MaxCutsExceeded`.
    pub fn into_certified(self) -> Result<Self> {
        if self.certified() {
            Ok(self)
        } else {
            Err(Error::MaxCutsExceeded { cuts: self.cuts.len(), violation: self.final_violation })
        }
    }
}

struct Cuts {
    points: Vec<Vec<f64>>,
    gains: Vec<f64>,
    widths: Vec<f64>,
}

impl Cuts {
    fn is_duplicate(&self, z: &[f64]) -> bool {
        self.points.iter().any(|p| {
            p.iter()
                .zip(z)
                .zip(&self.widths)
                .all(|((a, b), w)| (a - b).abs() <= 1e-10 * w.max(a.abs()).max(1e-300))
        })
    }
}

/// Solves the semi-infinite program by adding the most violated point of the
/// current majorant as a new constraint until none is found.
pub fn cutting_plane_solve(prob: &LsipProblem, stream: &mut RandomStream) -> Result<MajorantSolution> {
    prob.validate()?;
    let opts = &prob.options;
    let dim = prob.domain.dim();
    let c = prob.basis_row(&prob.anchor);
    // Functions that nearly vanish at the anchor would be almost free and
    // leave the dual badly scaled; the LP prices them at a small floor.
    let floor = 1e-9 * c.iter().fold(0.0f64, |a, v| a.max(*v));
    let priced: Vec<f64> = c.iter().map(|v| v.max(floor)).collect();
    let mut lp = IncrementalLp::new(priced)?;
    let mut cuts = Cuts {
        points: Vec::new(),
        gains: Vec::new(),
        widths: (0..dim).map(|k| prob.domain.width(k)).collect(),
    };
    let add = |lp: &mut IncrementalLp, cuts: &mut Cuts, z: Vec<f64>| {
        let row = prob.basis_row(&z);
        let g = prob.gain_at(&z);
        lp.add_row(&row, g);
        cuts.points.push(z);
        cuts.gains.push(g);
    };

    let mut initial = vec![prob.anchor.clone()];
    initial.extend(prob.domain.corners(6));
    let mut halton = Halton::new(dim);
    let mut u = vec![0.0; dim];
    for _ in 0..32 {
        halton.next_into(&mut u);
        let mut z = vec![0.0; dim];
        prob.domain.from_unit(&u, &mut z);
        initial.push(z);
    }
    if prob.horizon.is_some() {
        // the anchor's spatial position at the last searched time
        let mut z = prob.anchor.clone();
        z[0] = prob.domain.hi[0];
        initial.push(z);
    }
    for z in initial {
        add(&mut lp, &mut cuts, z);
    }
    let gain_scale = cuts.gains.iter().fold(0.0f64, |a, g| a.max(g.abs()));
    let tol = opts.tol_feas.unwrap_or(1e-6 * gain_scale.max(1.0));
    let nm = NelderMeadOptions::default();

    let mut history = Vec::new();
    let mut lambda;
    let mut objective;
    let mut final_violation;
    let mut researched = false;
    let termination = loop {
        let sol = lp.solve()?;
        if sol.status == LpStatus::Infeasible {
            return Err(insufficient(prob, &cuts));
        }
        lambda = sol.lambda;
        objective = lambda.iter().zip(&c).map(|(l, c)| l * c).sum::<f64>();
        history.push(sol.objective);

        let effort = if researched { 4 } else { 1 };
        let mut candidates = search(prob, &lambda, stream, &nm, effort, false);
        if candidates.first().map_or(true, |b| b.1 >= -tol) {
            candidates = search(prob, &lambda, stream, &nm, effort, true);
        }
        if candidates.first().map_or(true, |b| b.1 >= -tol) && opts.verify_points > 0 {
            candidates = verify_scan(prob, &lambda, opts.verify_points, stream);
        }
        final_violation = candidates.first().map_or(0.0, |b| b.1);
        debug!(
            "cut {}: objective {objective:.6}, violation {final_violation:.3e}",
            cuts.points.len()
        );
        if final_violation >= -tol {
            break Termination::Certified;
        }
        if cuts.points.len() >= opts.max_cuts {
            break Termination::MaxCuts;
        }
        let mut added = 0;
        let mut duplicate = false;
        for (z, v) in candidates {
            if v >= -tol || added >= opts.cuts_per_round.max(1) {
                break;
            }
            if cuts.is_duplicate(&z) {
                duplicate = added == 0;
                continue;
            }
            add(&mut lp, &mut cuts, z);
            added += 1;
        }
        if added == 0 {
            if duplicate && !researched {
                researched = true;
                history.pop();
                continue;
            }
            break Termination::DuplicateCut;
        }
        researched = false;
    };
    Ok(MajorantSolution {
        lambda,
        objective,
        cuts: cuts.points,
        history,
        final_violation,
        tol_feas: tol,
        termination,
    })
}

fn insufficient(prob: &LsipProblem, cuts: &Cuts) -> Error {
    let mut worst = (0, f64::NEG_INFINITY);
    for (j, (z, g)) in cuts.points.iter().zip(&cuts.gains).enumerate() {
        if *g <= 0.0 {
            continue;
        }
        let hmax = prob.basis_row(z).into_iter().fold(0.0f64, f64::max);
        let ratio = g / hmax.max(1e-300);
        if ratio > worst.1 {
            worst = (j, ratio);
        }
    }
    Error::BasisInsufficient { point: cuts.points[worst.0].clone(), gain: cuts.gains[worst.0] }
}

/// Candidate minimizers of the violation, best first. `effort` multiplies the
/// scan sizes. The thorough pass, run once the quick one finds nothing, adds
/// line searches on time slices and more multistart points.
fn search(
    prob: &LsipProblem,
    lambda: &[f64],
    stream: &mut RandomStream,
    nm: &NelderMeadOptions,
    effort: usize,
    thorough: bool,
) -> Vec<(Vec<f64>, f64)> {
    let opts = &prob.options;
    let active: Vec<(f64, &BasisFunction)> = lambda
        .iter()
        .zip(&prob.basis)
        .filter(|(l, _)| **l > 0.0)
        .map(|(l, b)| (*l, b))
        .collect();
    let viol = |t: f64, x: &[f64]| -> f64 {
        let h: f64 = active.iter().map(|(l, b)| l * b.value(t, x)).sum();
        let v = h - (prob.gain)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let dim = prob.domain.dim();
    let keep = (opts.cuts_per_round.max(1) + 2).max(32);
    let offset = stream.uniform();
    let mut out = Vec::new();
    let mut kinks = Vec::new();
    let mut scan = |bx: &SearchBox, f: &mut dyn FnMut(&[f64]) -> f64, wrap: &dyn Fn(Vec<f64>) -> Vec<f64>| {
        if bx.dim() == 1 {
            let found = grid_golden_minima(
                |s| f(&[s]),
                bx.lo[0],
                bx.hi[0],
                opts.n_grid * effort,
                keep,
                1e-10 * bx.width(0).max(1e-300),
            );
            out.extend(found.into_iter().map(|(s, v)| (wrap(vec![s]), v)));
        } else {
            let mut g = |z: &[f64]| f(z);
            let starts = opts.n_starts * effort * if thorough { 8 } else { 1 };
            let found = multistart_minima(&mut g, bx, starts, stream, nm);
            out.extend(found.into_iter().map(|(z, v)| (wrap(z), v)));
        }
    };
    match prob.horizon {
        None => {
            scan(&prob.domain, &mut |x| viol(0.0, x), &|z| z);
            if dim == 1 {
                // the infimum next to a jump is not attained; probe both sides
                for level in active.iter().flat_map(|(_, b)| b.jumps()) {
                    let step = 1e-12 * level.abs().max(1.0);
                    for x in [level - step, level + step] {
                        if x > prob.domain.lo[0] && x < prob.domain.hi[0] {
                            kinks.push((vec![x], viol(0.0, &[x])));
                        }
                    }
                }
            }
        }
        Some(_) => {
            let t_end = prob.domain.hi[0];
            let mut wbox = prob.domain.clone();
            wbox.lo[0] = 0.0;
            wbox.hi[0] = 1.0;
            scan(&wbox, &mut |w| viol(prob.time_of(w[0]), &w[1..]), &|mut w| {
                w[0] = prob.time_of(w[0]);
                w
            });
            let face = prob.face_box().expect("finite horizon");
            scan(&face, &mut |x| viol(t_end, x), &|x| {
                let mut z = vec![t_end];
                z.extend(x);
                z
            });
            if face.dim() == 1 && thorough {
                // line searches on time slices with a random offset per round,
                // two in three evenly spread in the search coordinate and the
                // rest evenly in time
                let (lo, hi) = (prob.domain.lo[0], prob.domain.hi[0]);
                let third = 43 * effort;
                for k in 0..3 * third {
                    let t = if k % 3 == 2 {
                        lo + (hi - lo) * ((k / 3) as f64 + offset) / third as f64
                    } else {
                        let j = (2 * (k / 3) + k % 3) as f64 + offset;
                        prob.time_of(j / (2 * third) as f64)
                    };
                    scan(&face, &mut |x| viol(t, x), &|x| {
                        let mut z = vec![t];
                        z.extend(x);
                        z
                    });
                }
            }
            if face.dim() == 1 {
                // the terminal limits jump at known levels; probe both sides
                for (_, level) in active.iter().flat_map(|(_, b)| b.terminal_kinks()) {
                    for x in [level * (1.0 - 1e-12), level * (1.0 + 1e-12)] {
                        if x > face.lo[0] && x < face.hi[0] {
                            kinks.push((vec![t_end, x], viol(t_end, &[x])));
                        }
                    }
                }
            }
        }
    }
    let first = usize::from(prob.horizon.is_some());
    if thorough && dim - first >= 2 {
        // faces of the spatial box, where the multistart rarely lands
        let mut wbox = prob.domain.clone();
        if first == 1 {
            wbox.lo[0] = 0.0;
            wbox.hi[0] = 1.0;
        }
        for k in first..dim {
            let mut keep = (0..dim).filter(|j| *j != k);
            let sub = SearchBox::new(
                keep.clone().map(|j| wbox.lo[j]).collect(),
                keep.by_ref().map(|j| wbox.hi[j]).collect(),
            );
            for end in [wbox.lo[k], wbox.hi[k]] {
                let lift = |w: &[f64]| {
                    let mut z = w.to_vec();
                    z.insert(k, end);
                    if first == 1 {
                        z[0] = prob.time_of(z[0]);
                    }
                    z
                };
                scan(&sub, &mut |w| {
                    let z = lift(w);
                    viol(if first == 1 { z[0] } else { 0.0 }, &z[first..])
                }, &|w| lift(&w));
            }
        }
    }
    out.extend(kinks);
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

/// Randomly shifted Halton scan of the domain (and of the terminal face),
/// sorted by violation.
fn verify_scan(
    prob: &LsipProblem,
    lambda: &[f64],
    n: usize,
    stream: &mut RandomStream,
) -> Vec<(Vec<f64>, f64)> {
    let mut out = Vec::with_capacity(n);
    let dim = prob.domain.dim();
    let shift: Vec<f64> = (0..dim).map(|_| stream.uniform()).collect();
    let mut halton = Halton::shifted(dim, shift);
    let mut u = vec![0.0; dim];
    for k in 0..n {
        halton.next_into(&mut u);
        let mut z = vec![0.0; dim];
        prob.domain.from_unit(&u, &mut z);
        if prob.horizon.is_some() {
            z[0] = match k % 4 {
                0 => z[0],
                3 => prob.domain.hi[0],
                _ => prob.time_of(u[0]),
            };
        }
        let v = prob.violation(lambda, &z);
        out.push((z, if v.is_nan() { f64::INFINITY } else { v }));
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out.truncate(prob.options.cuts_per_round.max(1) + 2);
    out
}

/// Smallest violation over `n` points of an independent low-discrepancy grid
/// of the domain, a quarter of them on the terminal face for finite horizons.
pub fn verify_feasibility(prob: &LsipProblem, lambda: &[f64], n: usize, seed: u64) -> (Vec<f64>, f64) {
    let mut stream = RandomStream::new(seed ^ 0x5eed_cafe);
    let dim = prob.domain.dim();
    let shift: Vec<f64> = (0..dim).map(|_| stream.uniform()).collect();
    let mut halton = Halton::shifted(dim, shift).skip(1 << 20);
    let mut u = vec![0.0; dim];
    let mut z = vec![0.0; dim];
    let mut worst = (prob.anchor.clone(), f64::INFINITY);
    for k in 0..n {
        halton.next_into(&mut u);
        prob.domain.from_unit(&u, &mut z);
        if prob.horizon.is_some() && k % 4 == 3 {
            z[0] = prob.domain.hi[0];
        }
        let v = prob.violation(lambda, &z);
        if v < worst.1 {
            worst = (z.clone(), v);
        }
    }
    worst
}
