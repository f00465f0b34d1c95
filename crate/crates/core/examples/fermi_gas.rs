//! Closed-form entropies of the ideal Fermi gas for both degeneracies.
//!
//! cargo run --example fermi_gas

use entropy_scaling::analytic::{fermi_gas_entropy, FermiGasSpec};
use entropy_scaling::scaling::fit_log;

fn main() -> entropy_scaling::Result<()> {
    for nu in [2, 4] {
        println!("nu = {nu}");
        println!("{:>8} {:>10} {:>10} {:>10}", "N", "S_r", "S_k", "S");
        let mut pts = Vec::new();
        for n in [1, 10, 100, 1000] {
            let e = fermi_gas_entropy(&FermiGasSpec::new(nu, 1.0, n)?)?;
            println!("{n:>8} {:>10.5} {:>10.5} {:>10.5}", e.s_r, e.s_k, e.s_total);
            pts.push((n as f64, e.s_total));
        }
        let fit = fit_log(&pts)?;
        println!("S = {:.4} + {:.4} ln N\n", fit.intercept_a, fit.slope_b);
    }
    Ok(())
}
