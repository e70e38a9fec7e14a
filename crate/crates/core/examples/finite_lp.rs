//! The finite linear program `min cᵀλ, Aλ ≥ b, λ ≥ 0`, cold and warm started.

use american_lsip::lsip::{solve_finite_lp, FiniteLP, IncrementalLp};

fn main() -> american_lsip::Result<()> {
    let mut lp = FiniteLP::new(vec![1.0, 2.0, 0.5]);
    let rows = [(vec![1.0, 1.0, 0.0], 2.0), (vec![0.0, 1.0, 1.0], 1.0), (vec![1.0, 0.0, 3.0], 3.0)];
    let mut warm = IncrementalLp::new(lp.c.clone())?;
    for (row, rhs) in rows {
        lp.push_row(row.clone(), rhs);
        warm.add_row(&row, rhs);
        let w = warm.solve()?;
        println!("after {} rows: objective {:.6}, λ = {:?}", warm.num_rows(), w.objective, w.lambda);
    }
    let cold = solve_finite_lp(&lp)?;
    println!("cold two-phase solve: {:?}, objective {:.6}", cold.status, cold.objective);
    Ok(())
}
