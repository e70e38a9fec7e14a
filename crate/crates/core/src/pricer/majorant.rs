use std::sync::Arc;

use log::{info, warn};

use crate::basis::{
    make_european_put, make_exchange_basis, make_harmonic_1d, make_levy_green_basis, sample_parameters,
    BasisFunction, Digital, LevyParams, MultiDigital, ParamSupport, ParameterSampler, Partials,
};
use crate::error::{Error, Result};
use crate::lsip::{cutting_plane_solve, GainFn, LsipProblem, MajorantSolution};
use crate::models::{Payoff, ProcessModel};
use crate::numerics::{RandomStream, SearchBox};
use crate::pricer::spec::{BasisFamily, BasisSpec, Contract, Point, SolverOptions};

/// Stream index of the cutting-plane search under the basis seed.
const SEARCH_STREAM: u64 = 0xc07;

/// A solved majorant `h* = Σλ_i h_i`, an upper bound of the value function
/// wherever it dominates the gain.
#[derive(Debug, Clone)]
pub struct Majorant {
    pub model: ProcessModel,
    pub contract: Contract,
    pub anchor: Point,
    pub basis: Vec<BasisFunction>,
    pub lambda: Vec<f64>,
    pub objective: f64,
    pub certified: bool,
    pub solution: MajorantSolution,
    /// The semi-infinite program that was solved.
    pub problem: LsipProblem,
}

impl Majorant {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn maturity(&self) -> Option<f64> {
        self.contract.maturity
    }

    pub fn tol_feas(&self) -> f64 {
        self.solution.tol_feas
    }

    /// Spatial part of the search box.
    pub fn search_box(&self) -> SearchBox {
        let b = &self.problem.domain;
        let k = usize::from(self.contract.maturity.is_some());
        SearchBox::new(b.lo[k..].to_vec(), b.hi[k..].to_vec())
    }

    pub fn gain(&self, x: &[f64]) -> f64 {
        self.contract.payoff.value(x)
    }

    /// Checks that `(t, x)` lies in the time-state domain.
    pub fn check_point(&self, t: f64, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) || !t.is_finite() {
            return Err(Error::Domain("non-finite point".into()));
        }
        if self.model.is_price_space() && x.iter().any(|v| *v <= 0.0) {
            return Err(Error::Domain(format!("prices must be > 0, got {x:?}")));
        }
        match self.contract.maturity {
            Some(mat) if !(0.0..=mat).contains(&t) => {
                Err(Error::Domain(format!("t = {t} outside [0, {mat}]")))
            }
            _ => Ok(()),
        }
    }

    /// `Σλ_i h_i(t, x)` without checks.
    #[inline]
    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.lambda
            .iter()
            .zip(&self.basis)
            .filter(|(l, _)| **l > 0.0)
            .map(|(l, h)| l * h.value(t, x))
            .sum()
    }

    pub fn evaluate(&self, t: f64, x: &[f64]) -> Result<f64> {
        self.check_point(t, x)?;
        Ok(self.value(t, x))
    }

    /// Analytic partials of the majorant, if every active function has them.
    pub fn partials(&self, t: f64, x: &[f64]) -> Option<Partials> {
        let d = x.len();
        let mut acc = Partials { delta: vec![0.0; d], gamma: vec![0.0; d], theta: 0.0 };
        for (l, h) in self.lambda.iter().zip(&self.basis).filter(|(l, _)| **l > 0.0) {
            let p = h.partials(t, x)?;
            for k in 0..d {
                acc.delta[k] += l * p.delta[k];
                acc.gamma[k] += l * p.gamma[k];
            }
            acc.theta += l * p.theta;
        }
        Some(acc)
    }
}

/// Evaluates the majorant at `(t, x)` without re-solving.
pub fn evaluate_majorant(m: &Majorant, t: f64, x: &[f64]) -> Result<f64> {
    m.evaluate(t, x)
}

/// Samples the basis, solves the semi-infinite program anchored at `anchor`
/// and requires a certified result.
pub fn price_upper(
    model: &ProcessModel,
    contract: &Contract,
    anchor: &Point,
    spec: &BasisSpec,
    opts: &SolverOptions,
) -> Result<Majorant> {
    let m = fit_majorant(model, contract, anchor, spec, opts)?;
    if !m.certified {
        return Err(Error::MaxCutsExceeded {
            cuts: m.solution.cuts.len(),
            violation: m.solution.final_violation,
        });
    }
    Ok(m)
}

/// Like [`price_upper`] but returns non-certified solutions flagged.
pub fn fit_majorant(
    model: &ProcessModel,
    contract: &Contract,
    anchor: &Point,
    spec: &BasisSpec,
    opts: &SolverOptions,
) -> Result<Majorant> {
    let basis = build_basis(model, contract, anchor, spec)?;
    fit_with_basis(model, contract, anchor, basis, spec.seed, opts)
}

/// Solves for a given basis. Functions vanishing at the anchor are dropped.
pub fn fit_with_basis(
    model: &ProcessModel,
    contract: &Contract,
    anchor: &Point,
    basis: Vec<BasisFunction>,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Majorant> {
    check_inputs(model, contract, anchor)?;
    let basis: Vec<BasisFunction> = basis
        .into_iter()
        .filter(|h| {
            let v = h.value(anchor.t, &anchor.x);
            v > 0.0 && v.is_finite()
        })
        .collect();
    if basis.is_empty() {
        return Err(Error::InvalidParameter("every basis function vanishes at the anchor".into()));
    }
    let space = match &opts.search_box {
        Some(b) => {
            if b.lo.len() != model.dim() || b.hi.len() != model.dim() {
                return Err(Error::DimensionMismatch { expected: model.dim(), got: b.lo.len() });
            }
            if b.lo.iter().zip(&b.hi).any(|(l, h)| !(l < h)) {
                return Err(Error::InvalidParameter("search box needs lo < hi".into()));
            }
            SearchBox::new(b.lo.clone(), b.hi.clone())
        }
        None => default_box(model, contract, anchor, &basis)?,
    };
    let (mut lo, mut hi) = (space.lo, space.hi);
    for k in 0..lo.len() {
        lo[k] = lo[k].min(anchor.x[k]);
        hi[k] = hi[k].max(anchor.x[k]);
    }
    let mut z = anchor.x.clone();
    if let Some(mat) = contract.maturity {
        lo.insert(0, anchor.t);
        hi.insert(0, mat);
        z.insert(0, anchor.t);
    }
    let payoff = contract.payoff.clone();
    let gain: GainFn = Arc::new(move |x: &[f64]| payoff.value(x));
    let problem = LsipProblem {
        basis,
        gain,
        horizon: contract.maturity,
        domain: SearchBox::new(lo, hi),
        anchor: z,
        options: opts.lsip(),
    };
    let mut stream = RandomStream::derived(seed, SEARCH_STREAM);
    let sol = cutting_plane_solve(&problem, &mut stream)?;
    info!(
        "objective {:.6} after {} cuts ({:?})",
        sol.objective,
        sol.cuts.len(),
        sol.termination
    );
    let m = Majorant {
        model: model.clone(),
        contract: contract.clone(),
        anchor: anchor.clone(),
        basis: problem.basis.clone(),
        lambda: sol.lambda.clone(),
        objective: sol.objective,
        certified: sol.certified(),
        solution: sol,
        problem,
    };
    check_edges(&m);
    Ok(m)
}

fn check_inputs(model: &ProcessModel, contract: &Contract, anchor: &Point) -> Result<()> {
    model.validate()?;
    contract.payoff.validate()?;
    let d = model.dim();
    if let Some(pd) = contract.payoff.dim() {
        if pd != d {
            return Err(Error::DimensionMismatch { expected: d, got: pd });
        }
    }
    if anchor.x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: anchor.x.len() });
    }
    if model.is_price_space() && anchor.x.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("anchor prices must be > 0".into()));
    }
    match contract.maturity {
        Some(mat) => {
            if !(mat > 0.0 && mat.is_finite()) {
                return Err(Error::InvalidParameter("maturity must be > 0".into()));
            }
            if !(anchor.t >= 0.0 && anchor.t < mat) {
                return Err(Error::Domain(format!("anchor time {} outside [0, {mat})", anchor.t)));
            }
        }
        None => {
            if matches!(model, ProcessModel::Gbm1d { .. } | ProcessModel::GbmMulti { .. }) {
                return Err(Error::InvalidParameter("GBM families need a maturity".into()));
            }
        }
    }
    Ok(())
}

/// Default spatial search box. Put-type gains vanish above the strike, so the
/// box ends 20% above it; unbounded gains get a box wide enough that the
/// exponential basis outgrows the gain at its edges.
fn default_box(
    model: &ProcessModel,
    contract: &Contract,
    anchor: &Point,
    basis: &[BasisFunction],
) -> Result<SearchBox> {
    let d = model.dim();
    match (&contract.payoff, model) {
        (Payoff::Put { strike } | Payoff::MinPut { strike }, _) if model.is_price_space() => {
            Ok(SearchBox::new(vec![1e-6 * strike; d], vec![1.2 * strike; d]))
        }
        (Payoff::IndexPut { strike, weights }, _) => {
            let hi: Vec<f64> = weights.iter().map(|w| (1.2 * strike / w).ln()).collect();
            let lo = hi.iter().map(|h| h - 8.0).collect();
            Ok(SearchBox::new(lo, hi))
        }
        (Payoff::Square | Payoff::Power { .. }, ProcessModel::CppExp { .. }) => {
            let shifts = basis.iter().filter_map(|h| match h {
                BasisFunction::LevyGreen { shift, .. } => Some(*shift),
                _ => None,
            });
            let top = shifts.fold(f64::NEG_INFINITY, f64::max);
            if !top.is_finite() {
                return Err(Error::InvalidParameter("jump model needs Green basis functions".into()));
            }
            Ok(SearchBox::new(vec![anchor.x[0].min(0.0) - 10.0], vec![top.max(anchor.x[0])]))
        }
        (Payoff::Square | Payoff::Power { .. }, _) => {
            let gamma = match contract.payoff {
                Payoff::Power { exponent } => exponent,
                _ => 2.0,
            };
            let growth = basis
                .iter()
                .filter_map(|h| match h {
                    BasisFunction::Exponential(e) => Some(e.coef.iter().fold(0.0f64, |a, c| a.max(c.abs()))),
                    _ => None,
                })
                .filter(|g| *g > 0.0)
                .fold(f64::INFINITY, f64::min);
            let half = if growth.is_finite() { (2.0 * gamma / growth).max(8.0) } else { 8.0 };
            Ok(SearchBox::new(
                anchor.x.iter().map(|x| x - half).collect(),
                anchor.x.iter().map(|x| x + half).collect(),
            ))
        }
        _ => Err(Error::InvalidParameter(format!(
            "no default search box for {:?} under this model; set solver.box",
            contract.payoff
        ))),
    }
}

/// Warns when the majorant falls below the gain just outside the search box.
fn check_edges(m: &Majorant) {
    if matches!(m.contract.payoff, Payoff::Put { .. }) {
        return;
    }
    let b = m.search_box();
    let d = b.dim();
    let t = m.anchor.t;
    let mut worst = f64::INFINITY;
    let n = 1usize << d.min(6);
    for mask in 0..n {
        let x: Vec<f64> = (0..d)
            .map(|k| {
                let w = 0.5 * b.width(k);
                if mask >> k.min(5) & 1 == 1 {
                    b.hi[k] + w
                } else if m.model.is_price_space() {
                    b.lo[k]
                } else {
                    b.lo[k] - w
                }
            })
            .collect();
        worst = worst.min(m.value(t, &x) - m.gain(&x));
    }
    if worst < -m.tol_feas() {
        warn!("majorant falls below the gain by {:.3e} outside the search box", -worst);
    }
}

/// Draws parameters and builds the basis described by `spec`.
pub fn build_basis(
    model: &ProcessModel,
    contract: &Contract,
    anchor: &Point,
    spec: &BasisSpec,
) -> Result<Vec<BasisFunction>> {
    let mut stream = RandomStream::new(spec.seed);
    let draw = |support: ParamSupport, stream: &mut RandomStream| {
        sample_parameters(&ParameterSampler { support, count: spec.n, seed: spec.seed }, stream)
    };
    let upper = |support: &ParamSupport, d: usize| match support {
        ParamSupport::Interval { hi, .. } => Some(vec![*hi; d]),
        ParamSupport::Box { hi, .. } => Some(hi.clone()),
        ParamSupport::Ellipsoid { .. } => None,
    };
    let mut out = Vec::new();
    match spec.family {
        BasisFamily::HarmonicPair => {
            let (rate, drift, vol) = match model {
                ProcessModel::BmDrift { rate, drift, cov } if drift.len() == 1 => {
                    (*rate, drift[0], cov[0][0].sqrt())
                }
                _ => return Err(family_mismatch(spec.family, model)),
            };
            let (up, down) = make_harmonic_1d(rate, drift, vol)?;
            out.push(up);
            out.push(down);
        }
        BasisFamily::Digital => {
            let ProcessModel::Gbm1d { rate, vol } = *model else {
                return Err(family_mismatch(spec.family, model));
            };
            let mat = maturity(contract)?;
            let support = spec.support.clone().unwrap_or(ParamSupport::Interval {
                lo: 0.0,
                hi: default_strike(contract, anchor),
            });
            let mut strikes: Vec<f64> = draw(support.clone(), &mut stream)?.into_iter().map(|a| a[0]).collect();
            if spec.upper_endpoint_on() {
                strikes.extend(upper(&support, 1).map(|v| v[0]));
            }
            if spec.constant_on() {
                strikes.push(f64::INFINITY);
            }
            for a in strikes.into_iter().filter(|a| *a > 0.0) {
                out.push(BasisFunction::Digital(Digital::new(0, a, rate, vol, mat)?));
            }
            if spec.european_on() {
                if let Payoff::Put { strike } = contract.payoff {
                    out.push(make_european_put(strike, rate, vec![vol], mat)?);
                }
            }
        }
        BasisFamily::MultiDigital => {
            let ProcessModel::GbmMulti { rate, vols, corr } = model else {
                return Err(family_mismatch(spec.family, model));
            };
            let mat = maturity(contract)?;
            let d = vols.len();
            let k = default_strike(contract, anchor);
            let support = spec.support.clone().unwrap_or(ParamSupport::Box {
                lo: vec![0.0; d],
                hi: vec![k; d],
            });
            let mut strikes: Vec<Vec<f64>> = match &support {
                ParamSupport::Interval { .. } => {
                    draw(support.clone(), &mut stream)?.into_iter().map(|a| vec![a[0]; d]).collect()
                }
                _ => draw(support.clone(), &mut stream)?,
            };
            if strikes.iter().any(|a| a.len() != d) {
                return Err(Error::DimensionMismatch { expected: d, got: strikes[0].len() });
            }
            if spec.upper_endpoint_on() {
                strikes.extend(upper(&support, d));
            }
            if spec.constant_on() {
                strikes.push(vec![f64::INFINITY; d]);
            }
            for a in strikes.into_iter().filter(|a| a.iter().all(|v| *v > 0.0)) {
                out.push(BasisFunction::MultiDigital(MultiDigital::new(
                    a,
                    *rate,
                    vols.clone(),
                    corr,
                    mat,
                    spec.orthant,
                )?));
            }
            if spec.european_on() && model.is_uncorrelated() {
                if let Payoff::MinPut { strike } = contract.payoff {
                    out.push(make_european_put(strike, *rate, vols.clone(), mat)?);
                }
            }
            if spec.exchanges_on() {
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            out.push(make_exchange_basis((i, j), vols[i], vols[j], corr[i][j], mat)?);
                        }
                    }
                }
            }
        }
        BasisFamily::Ellipsoid => {
            let ProcessModel::BmDrift { rate, drift, cov } = model else {
                return Err(family_mismatch(spec.family, model));
            };
            let support = spec.support.clone().unwrap_or(ParamSupport::Ellipsoid {
                cov: cov.clone(),
                drift: drift.clone(),
                rate: *rate,
            });
            for coef in draw(support, &mut stream)? {
                if coef.len() != drift.len() {
                    return Err(Error::DimensionMismatch { expected: drift.len(), got: coef.len() });
                }
                out.push(BasisFunction::Exponential(crate::basis::Exponential { coef }));
            }
        }
        BasisFamily::LevyGreen => {
            let ProcessModel::CppExp { rate, drift, intensity, jump_rate } = *model else {
                return Err(family_mismatch(spec.family, model));
            };
            let support = spec.support.clone().ok_or_else(|| {
                Error::InvalidParameter("Green basis needs a shift support".into())
            })?;
            let params = LevyParams { drift, intensity, jump_rate, rate };
            let mut shifts: Vec<f64> = draw(support.clone(), &mut stream)?.into_iter().map(|a| a[0]).collect();
            if spec.upper_endpoint_on() {
                shifts.extend(upper(&support, 1).map(|v| v[0]));
            }
            for a in shifts {
                out.push(make_levy_green_basis(params, a)?);
            }
        }
    }
    Ok(out)
}

fn maturity(contract: &Contract) -> Result<f64> {
    contract
        .maturity
        .ok_or_else(|| Error::InvalidParameter("digital families need a maturity".into()))
}

/// Upper end of the default strike range: the payoff strike, else the anchor.
fn default_strike(contract: &Contract, anchor: &Point) -> f64 {
    contract
        .payoff
        .strike()
        .unwrap_or_else(|| anchor.x.iter().fold(0.0f64, |a, v| a.max(*v)))
}

fn family_mismatch(family: BasisFamily, model: &ProcessModel) -> Error {
    Error::InvalidParameter(format!("basis family {family:?} does not fit model {model:?}"))
}
