//! Finite LP solver against an exhaustive vertex-enumeration oracle.

mod common;

use american_lsip::lsip::{solve_finite_lp, IncrementalLp, LpStatus};
use american_lsip::numerics::RandomStream;
use common::lp::{random_instance, vertex_oracle};

#[test]
fn matches_vertex_enumeration_on_random_instances() {
    let mut rng = RandomStream::new(2024);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..200 {
        let p = random_instance(&mut rng);
        let oracle = vertex_oracle(&p);
        let solved = solve_finite_lp(&p).unwrap();
        let mut inc = IncrementalLp::new(p.c.clone()).unwrap();
        for (row, rhs) in p.rows.iter().zip(&p.rhs) {
            inc.add_row(row, *rhs);
        }
        let warm = inc.solve().unwrap();
        match oracle {
            Some(v) => {
                optimal += 1;
                assert_eq!(solved.status, LpStatus::Optimal, "case {case}: {p:?}");
                assert!((solved.objective - v).abs() <= 1e-9 * v.abs().max(1.0), "case {case}");
                assert!((warm.objective - v).abs() <= 1e-9 * v.abs().max(1.0), "case {case}");
                for (row, rhs) in p.rows.iter().zip(&p.rhs) {
                    let lhs: f64 = row.iter().zip(&solved.lambda).map(|(a, l)| a * l).sum();
                    assert!(lhs >= rhs - 1e-9);
                }
                assert!(solved.lambda.iter().all(|&l| l >= 0.0));
            }
            None => {
                infeasible += 1;
                assert_eq!(solved.status, LpStatus::Infeasible, "case {case}: {p:?}");
                assert_eq!(warm.status, LpStatus::Infeasible, "case {case}");
            }
        }
    }
    assert!(optimal > 100, "too few feasible instances: {optimal}/{infeasible}");
}
