//! Uniform sphere: closed form against quadrature on a sampled density.
//!
//! cargo run --example classical_sphere

use std::f64::consts::PI;

use entropy_scaling::analytic::classical_sphere_entropy;
use entropy_scaling::entropy::entropy_position;
use entropy_scaling::numerics::RadialGrid;

fn main() -> entropy_scaling::Result<()> {
    println!("{:>6} {:>12} {:>12}", "R", "closed", "quadrature");
    for radius in [0.5, 1.0, 2.0, 10.0] {
        let grid = RadialGrid::new(radius, 1001)?;
        let rho0 = 3.0 / (4.0 * PI * radius.powi(3));
        let quad = entropy_position(&grid.sample(|_| rho0)?)?;
        println!(
            "{radius:>6} {:>12.6} {:>12.6}",
            classical_sphere_entropy(radius)?,
            quad
        );
    }
    Ok(())
}
