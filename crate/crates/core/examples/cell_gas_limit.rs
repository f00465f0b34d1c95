//! Bose and Fermi cell gases approach the classical entropic force as the
//! occupancy per cell falls.
//!
//! cargo run --example cell_gas_limit

use entropy_scaling::analytic::CellStatistics;
use entropy_scaling::scaling::{cell_gas_force, classical_limit_force, DEFAULT_AREA_STEP};

fn main() -> entropy_scaling::Result<()> {
    let target = classical_limit_force(1.0, 1.0, 1.0, 1.0)?;
    println!("classical limit {target:.8}");
    println!("{:>9} {:>12} {:>12}", "N/n", "Bose", "Fermi");
    for x in [0.3, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let ratio =
            |s| cell_gas_force(s, x, 1.0, 1.0, 1.0, 1.0, DEFAULT_AREA_STEP).map(|f| f / target);
        println!(
            "{x:>9.0e} {:>12.8} {:>12.8}",
            ratio(CellStatistics::Bose)?,
            ratio(CellStatistics::Fermi)?
        );
    }
    Ok(())
}
