//! Closed-form harmonic functions: digitals, exchange options, European
//! puts and the compound Poisson resolvent kernel.

use american_lsip::basis::{
    make_bs_digital, make_european_put, make_exchange_basis, make_levy_green_basis, LevyParams,
};

fn main() -> american_lsip::Result<()> {
    let digital = make_bs_digital(100.0, 0.06, 0.4, 0.5)?;
    let exchange = make_exchange_basis((0, 1), 0.4, 0.8, 0.0, 0.5)?;
    let put = make_european_put(100.0, 0.06, vec![0.4], 0.5)?;
    for x in [80.0, 100.0, 120.0] {
        println!(
            "x = {x:>5}: digital {:.5}, European put {:.4}, exchange option at (x, 100) {:.4}",
            digital.value(0.0, &[x]),
            put.value(0.0, &[x]),
            exchange.value(0.0, &[x, 100.0])
        );
    }
    let params = LevyParams { drift: -1.0, intensity: 0.5, jump_rate: 1.0, rate: 2.0 };
    let green = make_levy_green_basis(params, 0.0)?;
    let row: Vec<String> = [-2.0, -1.0, 0.0, 1.0, 2.0].iter().map(|x| format!("{:.4}", green.value(0.0, &[*x]))).collect();
    println!("resolvent kernel at -2..2: {}", row.join(", "));
    Ok(())
}
