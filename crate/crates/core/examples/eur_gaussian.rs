//! A Gaussian saturates the entropic uncertainty bound; hydrogen 1s does not.
//! Both momentum densities are produced by the radial Bessel transform.
//!
//! cargo run --release --example eur_gaussian

use std::f64::consts::PI;

use entropy_scaling::entropy::{entropy_momentum, entropy_position, eur_bound};
use entropy_scaling::numerics::{radial_fourier, RadialFunction, RadialGrid};

fn sum_of(u: impl Fn(f64) -> f64, r_max: f64, k_max: f64) -> entropy_scaling::Result<f64> {
    let r_grid = RadialGrid::new(r_max, 4001)?;
    let u = r_grid.sample(u)?;
    let rho: Vec<f64> = r_grid
        .nodes()
        .zip(u.values())
        .map(|(r, v)| {
            if r > 0.0 {
                v * v / (4.0 * PI * r * r)
            } else {
                0.0
            }
        })
        .collect();
    let mut rho = RadialFunction::new(r_grid, rho)?.into_values();
    rho[0] = (4.0 * rho[1] - rho[2]) / 3.0;
    let phi = radial_fourier(&u, 0, &RadialGrid::new(k_max, 4001)?)?;
    let n_k = phi.scaled(1.0 / (4.0 * PI).sqrt())?;
    let n_k = RadialFunction::new(*n_k.grid(), n_k.values().iter().map(|p| p * p).collect())?;
    Ok(entropy_position(&RadialFunction::new(r_grid, rho)?)? + entropy_momentum(&n_k)?)
}

fn main() -> entropy_scaling::Result<()> {
    let gauss = sum_of(
        |r| 2.0 * PI.powf(-0.25) * r * (-r * r / 2.0).exp(),
        12.0,
        12.0,
    )?;
    let hydrogen = sum_of(|r| 2.0 * r * (-r).exp(), 40.0, 80.0)?;
    println!("bound     {:.6}", eur_bound());
    println!("gaussian  {gauss:.6}");
    println!("hydrogen  {hydrogen:.6}");
    Ok(())
}
