use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lowerbound::LowerBoundOptions;
use crate::models::ProcessModel;
use crate::pricer::{BasisSpec, Contract, ImpliedVolOptions, Point, SolverOptions};

/// Configuration errors. All of them map to exit code 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    /// Dotted path of the offending field, when known.
    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Io { .. } => None,
            Self::Parse { field, .. } | Self::Invalid { field, .. } => Some(field),
        }
    }

    fn invalid(field: &str, message: impl ToString) -> Self {
        Self::Invalid { field: field.into(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    /// File receiving the CSV curve or table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// Times at which the exercise boundary is located.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundaryConfig {
    /// Explicit grid; overrides `n_times`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    /// Number of equally spaced times from the anchor time to maturity.
    pub n_times: usize,
    /// Coordinate varied along the section in several dimensions.
    pub axis: usize,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self { times: None, n_times: 51, axis: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpliedVolConfig {
    /// Price to match at the anchor.
    pub target: f64,
    #[serde(default)]
    pub options: ImpliedVolOptions,
}

/// One pricing run: dynamics, contract, basis, solver settings, the anchor
/// point and optional per-command sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ProcessModel,
    pub payoff: Contract,
    pub basis: BasisSpec,
    #[serde(default)]
    pub solver: SolverOptions,
    pub point: Point,
    #[serde(default)]
    pub output: OutputConfig,
    /// Extra points at which the majorant is reported.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evaluate: Vec<Point>,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub lower_bound: LowerBoundOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implied_vol: Option<ImpliedVolConfig>,
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let mut field = e.path().to_string();
        let message = e.inner().to_string();
        // missing keys are reported at their parent; name the key itself
        if let Some(key) = message.strip_prefix("missing field `").and_then(|r| r.split('`').next()) {
            field = if field == "." { key.to_string() } else { format!("{field}.{key}") };
        }
        ConfigError::Parse { field, message }
    })?;
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    cfg.model.validate().map_err(|e| ConfigError::invalid("model", e))?;
    cfg.payoff.payoff.validate().map_err(|e| ConfigError::invalid("payoff", e))?;
    let d = cfg.model.dim();
    if let Some(pd) = cfg.payoff.payoff.dim() {
        if pd != d {
            return Err(ConfigError::invalid("payoff", format!("payoff has dimension {pd}, model {d}")));
        }
    }
    if let Some(m) = cfg.payoff.maturity {
        if !(m > 0.0 && m.is_finite()) {
            return Err(ConfigError::invalid("payoff.maturity", "must be > 0"));
        }
    }
    check_point(&cfg.point, d, "point")?;
    for (i, p) in cfg.evaluate.iter().enumerate() {
        check_point(p, d, &format!("evaluate[{i}]"))?;
    }
    if let Some(tol) = cfg.solver.tol_feas {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ConfigError::invalid("solver.tol_feas", "must be > 0"));
        }
    }
    if cfg.solver.max_cuts == 0 {
        return Err(ConfigError::invalid("solver.max_cuts", "must be ≥ 1"));
    }
    if let Some(b) = &cfg.solver.search_box {
        if b.lo.len() != d || b.hi.len() != d || b.lo.iter().zip(&b.hi).any(|(l, h)| !(l < h)) {
            return Err(ConfigError::invalid("solver.box", format!("need lo < hi in {d} dimensions")));
        }
    }
    if cfg.boundary.axis >= d {
        return Err(ConfigError::invalid("boundary.axis", format!("must be < {d}")));
    }
    if let Some(iv) = &cfg.implied_vol {
        if !(iv.target > 0.0 && iv.target.is_finite()) {
            return Err(ConfigError::invalid("implied_vol.target", "must be > 0"));
        }
    }
    Ok(())
}

fn check_point(p: &Point, d: usize, name: &str) -> Result<(), ConfigError> {
    if p.x.len() != d {
        return Err(ConfigError::invalid(&format!("{name}.x"), format!("expected {d} coordinates")));
    }
    if !(p.t >= 0.0 && p.t.is_finite()) {
        return Err(ConfigError::invalid(&format!("{name}.t"), "must be ≥ 0"));
    }
    Ok(())
}
