use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::basis::{OrthantKind, ParamSupport};
use crate::lsip::LsipOptions;
use crate::models::Payoff;

/// A gain function together with an optional maturity. Without a maturity
/// the problem is perpetual.
///
/// Serialized as the payoff object with an extra `maturity` key.
#[derive(Debug, Clone, PartialEq)]
pub struct Contract {
    pub payoff: Payoff,
    pub maturity: Option<f64>,
}

impl Contract {
    pub fn perpetual(payoff: Payoff) -> Self {
        Self { payoff, maturity: None }
    }

    pub fn expiring(payoff: Payoff, maturity: f64) -> Self {
        Self { payoff, maturity: Some(maturity) }
    }
}

impl Serialize for Contract {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.payoff).map_err(serde::ser::Error::custom)?;
        if let (Some(t), Some(obj)) = (self.maturity, v.as_object_mut()) {
            obj.insert("maturity".into(), serde_json::json!(t));
        }
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Contract {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut v = serde_json::Value::deserialize(d)?;
        let maturity = match v.as_object_mut().and_then(|o| o.remove("maturity")) {
            None | Some(serde_json::Value::Null) => None,
            Some(m) => Some(m.as_f64().ok_or_else(|| D::Error::custom("maturity must be a number"))?),
        };
        let payoff = Payoff::deserialize(v).map_err(D::Error::custom)?;
        Ok(Self { payoff, maturity })
    }
}

/// Time and state of a pricing point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    #[serde(default)]
    pub t: f64,
    pub x: Vec<f64>,
}

impl Point {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        Self { t, x }
    }
}

/// Which family of harmonic functions spans the majorant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisFamily {
    /// The increasing and decreasing exponentials of a one-dimensional
    /// Brownian motion with drift.
    HarmonicPair,
    /// One-asset down-digitals under GBM.
    Digital,
    /// Multi-asset digitals under correlated GBM, with exchange options.
    MultiDigital,
    /// Exponentials `e^{a·x}` with `a` on the harmonic ellipsoid.
    Ellipsoid,
    /// Shifted resolvent kernels of a compound Poisson process.
    LevyGreen,
}

/// How to build the basis. Options left unset take family defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub family: BasisFamily,
    /// Number of randomly drawn functions.
    #[serde(default)]
    pub n: usize,
    /// Support of the random parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<ParamSupport>,
    pub seed: u64,
    /// Orthant convention of multi-asset digitals.
    #[serde(default)]
    pub orthant: OrthantKind,
    /// Add exchange options between every ordered pair of assets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exchanges: Option<bool>,
    /// Add the digital with infinite strike (the discount factor).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<bool>,
    /// Add the function at the upper end of the support: the top strike of
    /// digital families, the top shift of Green kernels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_endpoint: Option<bool>,
    /// Add the European put, the strike integral of the digitals, whose
    /// terminal value equals a put-type gain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub european: Option<bool>,
}

impl BasisSpec {
    pub fn new(family: BasisFamily, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            support: None,
            seed,
            orthant: OrthantKind::default(),
            exchanges: None,
            constant: None,
            upper_endpoint: None,
            european: None,
        }
    }

    pub fn with_support(mut self, support: ParamSupport) -> Self {
        self.support = Some(support);
        self
    }

    pub(crate) fn exchanges_on(&self) -> bool {
        self.exchanges.unwrap_or(self.family == BasisFamily::MultiDigital)
    }

    pub(crate) fn constant_on(&self) -> bool {
        self.constant.unwrap_or(self.family == BasisFamily::MultiDigital)
    }

    pub(crate) fn european_on(&self) -> bool {
        self.european
            .unwrap_or(matches!(self.family, BasisFamily::Digital | BasisFamily::MultiDigital))
    }

    pub(crate) fn upper_endpoint_on(&self) -> bool {
        self.upper_endpoint.unwrap_or(matches!(
            self.family,
            BasisFamily::Digital | BasisFamily::MultiDigital | BasisFamily::LevyGreen
        ))
    }
}

/// Spatial search box replacing the default one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxOverride {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Solver settings exposed to callers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub tol_feas: Option<f64>,
    pub max_cuts: usize,
    pub n_starts: usize,
    pub n_grid: usize,
    pub cuts_per_round: usize,
    pub verify_points: usize,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub search_box: Option<BoxOverride>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        let l = LsipOptions::default();
        Self {
            tol_feas: l.tol_feas,
            max_cuts: l.max_cuts,
            n_starts: l.n_starts,
            n_grid: l.n_grid,
            cuts_per_round: l.cuts_per_round,
            verify_points: l.verify_points,
            search_box: None,
        }
    }
}

impl SolverOptions {
    pub fn lsip(&self) -> LsipOptions {
        LsipOptions {
            tol_feas: self.tol_feas,
            max_cuts: self.max_cuts,
            n_starts: self.n_starts,
            n_grid: self.n_grid,
            cuts_per_round: self.cuts_per_round,
            verify_points: self.verify_points,
        }
    }
}
