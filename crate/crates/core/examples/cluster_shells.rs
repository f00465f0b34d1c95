//! Sodium-like clusters in a Woods-Saxon well: level scheme at one size, then
//! the entropy sum over the shell closures and its logarithmic fit.
//!
//! cargo run --release --example cluster_shells

use entropy_scaling::cluster::{
    cluster_entropy_scan, solve_bound_states, ClusterOptions, WoodsSaxonSpec, SHELL_CLOSURES,
};
use entropy_scaling::scaling::fit_log;

fn main() -> entropy_scaling::Result<()> {
    let spec = WoodsSaxonSpec::sodium(40);
    println!("bound levels, N = 40, R = {:.3} A", spec.well_radius());
    for orb in solve_bound_states(&spec, 6)? {
        println!("  {:<4} {:>9.4} eV", orb.label(), orb.energy);
    }

    let results = cluster_entropy_scan(&SHELL_CLOSURES, &spec, &ClusterOptions::default())?;
    println!("\n{:>4} {:>9} {:>9} {:>9}", "N", "S_r", "S_k", "S");
    for e in &results {
        println!(
            "{:>4} {:>9.4} {:>9.4} {:>9.4}",
            e.n_particles, e.s_r, e.s_k, e.s_total
        );
    }
    let pts: Vec<_> = results
        .iter()
        .map(|e| (e.n_particles as f64, e.s_total))
        .collect();
    let fit = fit_log(&pts)?;
    println!(
        "S = {:.4} + {:.4} ln N  (r^2 = {:.5})",
        fit.intercept_a, fit.slope_b, fit.r_squared
    );
    Ok(())
}
