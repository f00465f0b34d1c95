//! Entropic force of a logarithmic entropy law, its finite-difference check,
//! and the calibration that turns it into Newtonian gravity.
//!
//! cargo run --example entropic_force

use entropy_scaling::scaling::{
    calibrate_gravity, entropic_force_log, numerical_entropic_force,
    numerical_entropic_force_richardson, ForceLaw, PowerFit,
};

fn main() -> entropy_scaling::Result<()> {
    let (a, b, lambda) = (5.695, 0.907, 1.0);
    let law = PowerFit::constant_density(2.25)?;
    let model = |n: f64| Ok(a + b * n.ln());

    println!(
        "{:>6} {:>14} {:>14} {:>14}",
        "r", "analytic", "difference", "richardson"
    );
    for r in [1.0, 2.0, 5.0, 10.0] {
        println!(
            "{r:>6} {:>14.8e} {:>14.8e} {:>14.8e}",
            entropic_force_log(b, lambda, r)?,
            numerical_entropic_force(model, &law, lambda, r, 1e-3)?,
            numerical_entropic_force_richardson(model, &law, lambda, r, 1e-3)?,
        );
    }

    let (g, earth, moon, distance) = (6.674e-11, 5.972e24, 7.342e22, 3.844e8);
    let force = ForceLaw::from_log_law(
        b,
        1.0 / 3.0,
        calibrate_gravity(g, earth, moon, b)?,
        "cluster",
    )?;
    println!(
        "\nearth-moon: entropic {:.6e} N, Newton {:.6e} N",
        force.force(distance)?,
        -g * earth * moon / (distance * distance)
    );
    Ok(())
}
