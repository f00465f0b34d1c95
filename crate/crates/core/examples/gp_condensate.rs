//! Trapped Rb-87 condensates: ground states by imaginary-time propagation,
//! entropies, and the growth of the rms radius with atom number.
//!
//! cargo run --release --example gp_condensate

use entropy_scaling::gp::{gp_entropy_scan, GpSpec};
use entropy_scaling::scaling::{fit_log, fit_power};

fn main() -> entropy_scaling::Result<()> {
    let ns = [1_000, 10_000, 100_000, 1_000_000];
    let points = gp_entropy_scan(&ns, &GpSpec::rubidium(1))?;
    println!(
        "{:>8} {:>9} {:>9} {:>10} {:>9}",
        "N", "mu", "r_rms/b", "r_rms/A", "S"
    );
    for p in &points {
        println!(
            "{:>8} {:>9.4} {:>9.4} {:>10.1} {:>9.4}",
            p.entropy.n_particles,
            p.chemical_potential_mu,
            p.rms_radius,
            p.rms_radius_angstrom,
            p.entropy.s_total
        );
    }
    let s = fit_log(
        &points
            .iter()
            .map(|p| (p.entropy.n_particles as f64, p.entropy.s_total))
            .collect::<Vec<_>>(),
    )?;
    let r = fit_power(
        &points
            .iter()
            .map(|p| (p.entropy.n_particles as f64, p.rms_radius))
            .collect::<Vec<_>>(),
    )?;
    println!("S = {:.4} + {:.4} ln N", s.intercept_a, s.slope_b);
    println!("r_rms = {:.4} N^{:.4} b", r.prefactor_r0, r.exponent_alpha);
    Ok(())
}
