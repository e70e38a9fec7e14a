//! Exhaustive vertex enumeration for small linear programs.

use american_lsip::lsip::FiniteLP;
use american_lsip::numerics::RandomStream;

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-10 {
            return None;
        }
        a.swap(p, col);
        b.swap(p, col);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Minimum of cᵀλ over every basic feasible point of {Aλ ≥ b, λ ≥ 0}.
pub fn vertex_oracle(p: &FiniteLP) -> Option<f64> {
    let n = p.c.len();
    // All constraints as (row, rhs): the LP rows then the bounds λ_i ≥ 0.
    let mut cons: Vec<(Vec<f64>, f64)> = p.rows.iter().cloned().zip(p.rhs.iter().copied()).collect();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        cons.push((e, 0.0));
    }
    let m = cons.len();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let chosen: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let a: Vec<Vec<f64>> = chosen.iter().map(|&i| cons[i].0.clone()).collect();
        let b: Vec<f64> = chosen.iter().map(|&i| cons[i].1).collect();
        let Some(x) = solve_square(a, b) else { continue };
        let feasible = cons
            .iter()
            .all(|(row, rhs)| row.iter().zip(&x).map(|(r, v)| r * v).sum::<f64>() >= rhs - 1e-9);
        if feasible {
            let obj: f64 = p.c.iter().zip(&x).map(|(c, v)| c * v).sum();
            best = Some(best.map_or(obj, |b: f64| b.min(obj)));
        }
    }
    best
}

pub fn random_instance(rng: &mut RandomStream) -> FiniteLP {
    let n = 1 + (rng.uniform() * 5.0) as usize;
    let k = 1 + (rng.uniform() * 8.0) as usize;
    // Every fifth instance uses small integers, which makes ties and
    // degenerate vertices common.
    let integer = rng.uniform() < 0.2;
    let mut draw = |lo: f64, hi: f64| {
        let v = rng.uniform_in(lo, hi);
        if integer {
            v.round()
        } else {
            v
        }
    };
    let c: Vec<f64> = (0..n).map(|_| draw(0.0, 3.0)).collect();
    let mut p = FiniteLP::new(c);
    for _ in 0..k {
        let row: Vec<f64> = (0..n).map(|_| draw(-0.5, 2.0)).collect();
        let rhs = draw(-1.0, 2.0);
        p.push_row(row, rhs);
    }
    p
}
