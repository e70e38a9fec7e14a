//! Command-line front end: configuration files, subcommands and output.

mod config;
mod tables;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub use config::{
    load_config, parse_config, BoundaryConfig, ConfigError, Format, ImpliedVolConfig,
    OutputConfig, RunConfig,
};
pub use tables::{index_put_table, min_put_table, put_table, Table, INDEX_PUT_POINTS, PUT_REFERENCE};

use crate::error::Error;
use crate::lowerbound::{lower_bound_mc, LowerBoundEstimate};
use crate::numerics::RandomStream;
use crate::pricer::{
    exercise_boundary_on, greeks, implied_vol, price_upper, stopping_rule, BoundaryCurve,
    Majorant, Point, Section, StopSide, BOUNDARY_SCAN,
};

#[derive(Debug, Parser)]
#[command(name = "amlsip", version, about = "American option upper bounds by semi-infinite linear programming")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the basis seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Writes the CSV curve or table to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Format of the document printed on stdout.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Upper bound at the anchor and the configured points.
    Price,
    /// Exercise boundary over a time grid.
    Boundary,
    /// Delta, gamma and theta of the majorant.
    Greeks,
    /// Volatility reproducing a target price.
    ImpliedVol,
    /// Monte Carlo lower bound from the ε-stopping rule.
    LowerBound,
    /// Reproduces a reference table as CSV.
    Table {
        /// 1: one-asset put, 2: two-asset min-put, 4: perpetual index put.
        #[arg(value_parser = ["1", "2", "4"])]
        which: String,
    },
    /// Runs quick invariant checks.
    Selftest,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(#[from] Error),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error("self test failed: {0}")]
    Selftest(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for solver failures, 2 for usage and configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Solver(e) => match e {
                Error::BasisInsufficient { .. }
                | Error::MaxCutsExceeded { .. }
                | Error::Infeasible
                | Error::NoRoot { .. }
                | Error::RootNotBracketed { .. }
                | Error::Internal(_) => 1,
                _ => 2,
            },
            Self::NotConverged(_) | Self::Selftest(_) => 1,
            Self::Config(_) | Self::Usage(_) | Self::Io(_) | Self::Csv(_) => 2,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Documents go to `stdout`, diagnostics to stderr.
pub fn run_command<I, S>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = if cli.verbose { "debug" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("amlsip: {e}");
            e.exit_code()
        }
    }
}

/// Result document of the pricing subcommands.
#[derive(Debug, Serialize)]
struct Report<'a> {
    command: &'a str,
    config_echo: &'a RunConfig,
    objective: f64,
    lambda: &'a [f64],
    cuts: usize,
    certified: bool,
    values: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary: Option<BoundaryCurve>,
    #[serde(skip_serializing_if = "Option::is_none")]
    greeks: Option<Vec<GreeksRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    implied_vol: Option<crate::pricer::ImpliedVolResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<LowerBoundEstimate>,
    timing_ms: f64,
}

#[derive(Debug, Serialize)]
struct Value {
    t: f64,
    x: Vec<f64>,
    upper: f64,
    gain: f64,
}

#[derive(Debug, Serialize)]
struct GreeksRow {
    t: f64,
    x: Vec<f64>,
    delta: Vec<f64>,
    gamma: Vec<f64>,
    theta: f64,
    analytic: bool,
}

fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Table { which } => return run_table(cli, which, stdout),
        Command::Selftest => return run_selftest(cli, stdout),
        _ => {}
    }
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let mut cfg = load_config(path)?;
    if let Some(seed) = cli.seed {
        cfg.basis.seed = seed;
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    let start = Instant::now();
    let (name, fit) = match cli.command {
        Command::Price => ("price", Fit::Price),
        Command::Boundary => ("boundary", Fit::Price),
        Command::Greeks => ("greeks", Fit::Price),
        Command::LowerBound => ("lower-bound", Fit::Price),
        Command::ImpliedVol => ("implied-vol", Fit::ImpliedVol),
        Command::Table { .. } | Command::Selftest => unreachable!("handled above"),
    };
    let (m, iv) = match fit {
        Fit::Price => (price_upper(&cfg.model, &cfg.payoff, &cfg.point, &cfg.basis, &cfg.solver)?, None),
        Fit::ImpliedVol => {
            let ivc = cfg
                .implied_vol
                .as_ref()
                .ok_or_else(|| CliError::Usage("implied-vol needs an \"implied_vol\" section".into()))?;
            let r = implied_vol(
                ivc.target,
                &cfg.model,
                &cfg.payoff,
                &cfg.point,
                &cfg.basis,
                &cfg.solver,
                &ivc.options,
            )?;
            let model = cfg.model.with_vol(r.sigma()).expect("implied_vol checked the model");
            (price_upper(&model, &cfg.payoff, &cfg.point, &cfg.basis, &cfg.solver)?, Some(r))
        }
    };
    let points: Vec<&Point> = std::iter::once(&cfg.point).chain(&cfg.evaluate).collect();
    let values = points
        .iter()
        .map(|p| Ok(Value { t: p.t, x: p.x.clone(), upper: m.evaluate(p.t, &p.x)?, gain: m.gain(&p.x) }))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = Report {
        command: name,
        config_echo: &cfg,
        objective: m.objective,
        lambda: &m.lambda,
        cuts: m.solution.cuts.len(),
        certified: m.certified,
        values,
        boundary: None,
        greeks: None,
        implied_vol: None,
        lower_bound: None,
        timing_ms: 0.0,
    };
    let csv_rows: Table = match cli.command {
        Command::Price => {
            let d = m.dim();
            let mut rows = vec![[vec!["t".to_string()], coord_names("x", d), vec!["upper".into()]].concat()];
            for v in &report.values {
                rows.push([vec![fmt(v.t)], v.x.iter().map(|x| fmt(*x)).collect(), vec![fmt(v.upper)]].concat());
            }
            rows
        }
        Command::Boundary => {
            let curve = boundary(&m, &cfg.boundary)?;
            let rows = boundary_rows(&curve);
            report.boundary = Some(curve);
            rows
        }
        Command::Greeks => {
            let d = m.dim();
            let mut rows = vec![[
                vec!["t".to_string()],
                coord_names("x", d),
                coord_names("delta", d),
                coord_names("gamma", d),
                vec!["theta".into()],
            ]
            .concat()];
            let mut out = Vec::new();
            for p in &points {
                let g = greeks(&m, p.t, &p.x)?;
                rows.push(
                    [
                        vec![fmt(p.t)],
                        p.x.iter().map(|v| fmt(*v)).collect(),
                        g.delta.iter().map(|v| fmt(*v)).collect(),
                        g.gamma.iter().map(|v| fmt(*v)).collect(),
                        vec![fmt(g.theta)],
                    ]
                    .concat(),
                );
                out.push(GreeksRow {
                    t: p.t,
                    x: p.x.clone(),
                    delta: g.delta,
                    gamma: g.gamma,
                    theta: g.theta,
                    analytic: g.analytic,
                });
            }
            report.greeks = Some(out);
            rows
        }
        Command::LowerBound => {
            let mut stream = RandomStream::new(cfg.basis.seed);
            let lb = lower_bound_mc(&m, &cfg.lower_bound, &mut stream)?;
            let rows = vec![
                ["estimate", "stderr", "n_paths", "eps", "dt", "horizon"].map(String::from).to_vec(),
                vec![fmt(lb.estimate), fmt(lb.stderr), lb.n_paths.to_string(), fmt(lb.eps), fmt(lb.dt), fmt(lb.horizon)],
            ];
            report.lower_bound = Some(lb);
            rows
        }
        Command::ImpliedVol => {
            let r = iv.expect("fitted above");
            let mut rows = vec![["iteration", "sigma", "objective"].map(String::from).to_vec()];
            for (k, s) in r.sigmas.iter().enumerate() {
                let obj = r.objectives.get(k).map_or(String::new(), |v| fmt(*v));
                rows.push(vec![k.to_string(), fmt(*s), obj]);
            }
            report.implied_vol = Some(r);
            rows
        }
        Command::Table { .. } | Command::Selftest => unreachable!("handled above"),
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(p) = &cfg.output.path {
        write_csv(std::fs::File::create(p)?, &csv_rows)?;
    }
    match cfg.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *stdout, &report).map_err(std::io::Error::from)?;
            writeln!(stdout)?;
        }
        Format::Csv => write_csv(&mut *stdout, &csv_rows)?,
    }
    if let Some(r) = &report.implied_vol {
        if !r.converged {
            return Err(CliError::NotConverged(format!("implied volatility after {} fits", r.outer_iterations())));
        }
    }
    Ok(())
}

enum Fit {
    Price,
    ImpliedVol,
}

fn boundary(m: &Majorant, bc: &BoundaryConfig) -> Result<BoundaryCurve, Error> {
    let t0 = m.anchor.t;
    let grid = match (&bc.times, m.maturity()) {
        (Some(ts), _) => ts.clone(),
        (None, Some(mat)) => {
            let n = bc.n_times.max(2);
            // the boundary is not defined at maturity itself
            let end = mat - 1e-3 * (mat - t0);
            (0..n).map(|i| t0 + (end - t0) * i as f64 / (n - 1) as f64).collect()
        }
        (None, None) => vec![t0],
    };
    let section = Section { axis: bc.axis, base: m.anchor.x.clone() };
    exercise_boundary_on(m, &grid, &section, BOUNDARY_SCAN)
}

/// `t,boundary` rows; two-sided regions give one row per side.
fn boundary_rows(curve: &BoundaryCurve) -> Table {
    let opt = |v: Option<f64>| v.map_or(String::new(), fmt);
    let mut rows = vec![vec!["t".to_string(), "boundary".to_string()]];
    for p in &curve.points {
        match curve.side {
            StopSide::Outside => {
                rows.push(vec![fmt(p.t), opt(p.lower)]);
                rows.push(vec![fmt(p.t), opt(p.upper)]);
            }
            side => rows.push(vec![fmt(p.t), opt(p.level(side))]),
        }
    }
    rows
}

fn run_table(cli: &Cli, which: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let seed = cli.seed.unwrap_or(1);
    let solver = match &cli.config {
        Some(p) => load_config(p)?.solver,
        None => Default::default(),
    };
    let rows = match which {
        "1" => put_table(seed, &solver)?,
        "2" => min_put_table(seed, &solver)?,
        "4" => index_put_table(seed, &solver)?,
        other => return Err(CliError::Usage(format!("unknown table {other}"))),
    };
    if let Some(p) = &cli.out {
        write_csv(std::fs::File::create(p)?, &rows)?;
    }
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(&mut *stdout, &rows)?,
        Format::Json => {
            let header = &rows[0];
            let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows[1..]
                .iter()
                .map(|r| header.iter().cloned().zip(r.iter().map(|v| v.clone().into())).collect())
                .collect();
            serde_json::to_writer_pretty(&mut *stdout, &objs).map_err(std::io::Error::from)?;
            writeln!(stdout)?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn run_selftest(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let checks = selftest_checks();
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *stdout, &checks).map_err(std::io::Error::from)?;
            writeln!(stdout)?;
        }
        Format::Csv => {
            let mut rows = vec![vec!["check".to_string(), "pass".into(), "detail".into()]];
            rows.extend(checks.iter().map(|c| vec![c.name.to_string(), c.pass.to_string(), c.detail.clone()]));
            write_csv(&mut *stdout, &rows)?;
        }
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Selftest(failed.join(", ")))
    }
}

fn selftest_checks() -> Vec<Check> {
    use crate::lsip::{solve_finite_lp, FiniteLP};
    use crate::models::{Payoff, ProcessModel};
    use crate::numerics::std_normal_cdf;
    use crate::pricer::{BasisFamily, BasisSpec, Contract, SolverOptions};

    let mut checks = Vec::new();
    let mut check = |name: &'static str, pass: bool, detail: String| checks.push(Check { name, pass, detail });

    let phi = std_normal_cdf(0.7) + std_normal_cdf(-0.7);
    check("normal cdf symmetry", (phi - 1.0).abs() < 1e-14, format!("Φ(0.7) + Φ(−0.7) = {phi}"));

    let mut lp = FiniteLP::new(vec![1.0]);
    lp.push_row(vec![1.0], 1.0);
    let sol = solve_finite_lp(&lp);
    let ok = sol.as_ref().is_ok_and(|s| (s.objective - 1.0).abs() < 1e-12);
    check("one-variable LP", ok, format!("{:?}", sol.map(|s| s.objective)));

    let g = Payoff::MinPut { strike: 100.0 }.eval(&[80.0, 120.0]);
    check("min-put gain", g == Ok(20.0), format!("{g:?}"));

    let square = price_upper(
        &ProcessModel::BmDrift { rate: 0.1, drift: vec![0.0], cov: vec![vec![1.0]] },
        &Contract::perpetual(Payoff::Square),
        &Point::new(0.0, vec![0.0]),
        &BasisSpec::new(BasisFamily::HarmonicPair, 0, 1),
        &SolverOptions::default(),
    );
    match square {
        Ok(m) => {
            check("perpetual square value", (m.objective - 5.322).abs() < 0.005, format!("{:.4}", m.objective));
            let b = exercise_boundary_on(&m, &[0.0], &Section { axis: 0, base: vec![0.0] }, BOUNDARY_SCAN);
            let ok = b.as_ref().is_ok_and(|b| {
                let p = &b.points[0];
                p.lower.is_some_and(|l| (l + 4.618).abs() < 0.02)
                    && p.upper.is_some_and(|u| (u - 4.618).abs() < 0.02)
            });
            check("perpetual square boundary", ok, format!("{:?}", b.map(|b| b.points)));
            let ok = stopping_rule(&m, 1e10).is_ok_and(|r| r.stop(0.0, &[0.0]));
            check("huge slack stops at once", ok, String::new());
        }
        Err(e) => check("perpetual square value", false, e.to_string()),
    }

    match put_table(1, &SolverOptions::default()) {
        Ok(rows) => {
            let ok = rows[1..].iter().all(|r| r[2].parse::<f64>().unwrap() >= r[1].parse::<f64>().unwrap() - 1e-4);
            check("put majorant dominates reference", ok, format!("{:?}", rows[3]));
        }
        Err(e) => check("put majorant dominates reference", false, e.to_string()),
    }
    checks
}

fn coord_names(prefix: &str, d: usize) -> Vec<String> {
    if d == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=d).map(|k| format!("{prefix}{k}")).collect()
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn write_csv<W: Write>(w: W, rows: &Table) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.write_record(r)?;
    }
    wr.flush()?;
    Ok(())
}
