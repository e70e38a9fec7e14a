use std::time::Instant;

use crate::basis::ParamSupport;
use crate::error::Result;
use crate::models::{Payoff, ProcessModel};
use crate::pricer::{
    default_epsilon, price_upper, stopping_rule, BasisFamily, BasisSpec, Contract, Point,
    SolverOptions,
};

/// American put values (K = 100, r = 0.06, σ = 0.4, T = 0.5) from a
/// Richardson-extrapolated binomial tree.
pub const PUT_REFERENCE: [(f64, f64); 5] =
    [(80.0, 21.60574), (90.0, 14.91763), (100.0, 9.94514), (110.0, 6.43378), (120.0, 4.06004)];

/// Table rows as strings, header first.
pub type Table = Vec<Vec<String>>;

fn secs(t: Instant) -> String {
    format!("{:.1}s", t.elapsed().as_secs_f64())
}

/// One-asset put priced once at x = 100 and evaluated across spot prices.
pub fn put_table(seed: u64, solver: &SolverOptions) -> Result<Table> {
    let start = Instant::now();
    let m = price_upper(
        &ProcessModel::Gbm1d { rate: 0.06, vol: 0.4 },
        &Contract::expiring(Payoff::Put { strike: 100.0 }, 0.5),
        &Point::new(0.0, vec![100.0]),
        &BasisSpec::new(BasisFamily::Digital, 100, seed)
            .with_support(ParamSupport::Interval { lo: 0.0, hi: 100.0 }),
        solver,
    )?;
    let time = secs(start);
    let mut rows = vec![header(&["x", "v(x)", "RLP", "|v(x)-RLP|", "time"])];
    for (x, v) in PUT_REFERENCE {
        let h = m.value(0.0, &[x]);
        let t = if x == 100.0 { time.clone() } else { String::new() };
        rows.push(vec![format!("{x}"), format!("{v:.5}"), format!("{h:.5}"), format!("{:.5}", (h - v).abs()), t]);
    }
    Ok(rows)
}

/// Two-asset min-put priced once at (100, 100) and evaluated on a 3×3 grid.
pub fn min_put_table(seed: u64, solver: &SolverOptions) -> Result<Table> {
    let start = Instant::now();
    let m = price_upper(
        &ProcessModel::GbmMulti {
            rate: 0.06,
            vols: vec![0.4, 0.8],
            corr: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        },
        &Contract::expiring(Payoff::MinPut { strike: 100.0 }, 0.5),
        &Point::new(0.0, vec![100.0, 100.0]),
        &BasisSpec::new(BasisFamily::MultiDigital, 150, seed)
            .with_support(ParamSupport::Box { lo: vec![0.0; 2], hi: vec![100.0; 2] }),
        solver,
    )?;
    let time = secs(start);
    let mut rows = vec![header(&["x", "RLP", "time"])];
    for x1 in [80.0, 100.0, 120.0] {
        for x2 in [80.0, 100.0, 120.0] {
            let t = if x1 == 100.0 && x2 == 100.0 { time.clone() } else { String::new() };
            rows.push(vec![format!("({x1},{x2})"), format!("{:.4}", m.value(0.0, &[x1, x2])), t]);
        }
    }
    Ok(rows)
}

/// Perpetual index put on two log-prices, one solve per starting point.
pub fn index_put_table(seed: u64, solver: &SolverOptions) -> Result<Table> {
    let model = ProcessModel::BmDrift {
        rate: 0.1,
        drift: vec![0.0, 0.0],
        cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    let contract = Contract::perpetual(Payoff::IndexPut { strike: 10.0, weights: vec![1.0, 1.0] });
    let mut rows = vec![header(&["x0", "g(x0)", "RLP", "stopping point", "time"])];
    for x0 in INDEX_PUT_POINTS {
        let start = Instant::now();
        let m = price_upper(
            &model,
            &contract,
            &Point::new(0.0, x0.to_vec()),
            &BasisSpec::new(BasisFamily::Ellipsoid, 30, seed),
            solver,
        )?;
        let stop = stopping_rule(&m, default_epsilon(&m))?.stop(0.0, &x0);
        rows.push(vec![
            format!("({},{})", x0[0], x0[1]),
            format!("{:.4}", m.gain(&x0)),
            format!("{:.4}", m.objective),
            (if stop { "yes" } else { "no" }).to_string(),
            secs(start),
        ]);
    }
    Ok(rows)
}

pub const INDEX_PUT_POINTS: [[f64; 2]; 4] = [[0.7, 0.2], [0.7, 0.7], [1.0, 1.0], [1.4, 0.6]];

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}
