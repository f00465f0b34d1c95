//! Entropies of one-normalized densities against densities normalized to N.
//!
//! cargo run --example norm_transforms

use entropy_scaling::entropy::{to_norm_1, to_norm_n, EntropyKind};

fn main() -> entropy_scaling::Result<()> {
    let s_r = 4.0;
    println!("{:>6} {:>12} {:>12}", "N", "S_r(N)", "back");
    for n in [1, 10, 100, 1000] {
        let scaled = to_norm_n(s_r, n, EntropyKind::Position)?;
        println!(
            "{n:>6} {scaled:>12.5} {:>12.5}",
            to_norm_1(scaled, n, EntropyKind::Position)?
        );
    }

    println!("\nS~_r = -5.59 N - 2 N ln N in unit normalization:");
    for n in [10usize, 100] {
        let nf = n as f64;
        let s = to_norm_1(-5.59 * nf - 2.0 * nf * nf.ln(), n, EntropyKind::Position)?;
        println!("  N = {n:>3}: {s:.4} = -5.59 - ln N");
    }
    Ok(())
}
