//! Shannon information entropies of one-normalized densities in position and
//! momentum space, their sum, and the change of normalization between
//! densities normalized to one and to the particle number.
//!
//! All entropies are in nats.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{integrate_radial, RadialFunction};

/// Tolerance on `int rho d^3r = 1` before an entropy is evaluated.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;

/// Lower bound `3 (1 + ln pi)` on `S_r + S_k` in three dimensions (hbar = 1).
pub fn eur_bound() -> f64 {
    3.0 * (1.0 + PI.ln())
}

/// Entropies of one system at one particle number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub s_r: f64,
    pub s_k: f64,
    pub s_total: f64,
    /// `s_total - 3 (1 + ln pi)`; negative values are reported, not rejected.
    pub eur_margin: f64,
    pub n_particles: usize,
}

impl EntropyResult {
    /// True when the margin is below `-slack`.
    pub fn violates_eur(&self, slack: f64) -> bool {
        self.eur_margin < -slack
    }
}

/// `S_r = -int rho ln rho d^3r`.
pub fn entropy_position(rho: &RadialFunction) -> Result<f64> {
    shannon(rho)
}

/// `S_k = -int n ln n d^3k`.
pub fn entropy_momentum(n_k: &RadialFunction) -> Result<f64> {
    shannon(n_k)
}

fn shannon(density: &RadialFunction) -> Result<f64> {
    let values = density.values();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::InvalidDensity { index, value });
    }
    let integral = integrate_radial(density)?;
    let support = values.iter().filter(|v| **v > 0.0).count();
    if support < 3 || (integral - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidNormalization { integral });
    }
    // renormalize by the computed integral so the quadrature bias of the
    // normalization does not leak into S
    let grid = density.grid();
    let weights = grid.weights();
    let s = values
        .iter()
        .zip(&weights)
        .enumerate()
        .filter(|(_, (v, _))| **v > 0.0)
        .map(|(i, (v, w))| {
            let p = v / integral;
            let r = grid.node(i);
            -w * 4.0 * PI * r * r * p * p.ln()
        })
        .sum();
    Ok(s)
}

/// Assemble an [`EntropyResult`] from the two partial entropies.
pub fn entropy_sum(s_r: f64, s_k: f64, n_particles: usize) -> EntropyResult {
    let s_total = s_r + s_k;
    EntropyResult {
        s_r,
        s_k,
        s_total,
        eur_margin: s_total - eur_bound(),
        n_particles,
    }
}

/// Which entropy a normalization transform acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyKind {
    Position,
    Momentum,
    Sum,
}

impl EntropyKind {
    // each of S_r and S_k picks up one ln N term
    fn log_terms(self) -> f64 {
        match self {
            EntropyKind::Position | EntropyKind::Momentum => 1.0,
            EntropyKind::Sum => 2.0,
        }
    }
}

fn check_count(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("particle number must be at least 1"));
    }
    Ok(n as f64)
}

/// Entropy of the density normalized to `N` from the one-normalized value:
/// `S~ = N S - c N ln N` with `c = 1` for `S_r`, `S_k` and `c = 2` for the sum.
pub fn to_norm_n(s: f64, n: usize, kind: EntropyKind) -> Result<f64> {
    let n = check_count(n)?;
    Ok(n * s - kind.log_terms() * n * n.ln())
}

/// Inverse of [`to_norm_n`]: `S = S~ / N + c ln N`.
pub fn to_norm_1(s_tilde: f64, n: usize, kind: EntropyKind) -> Result<f64> {
    let n = check_count(n)?;
    Ok(s_tilde / n + kind.log_terms() * n.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RadialGrid;
    use proptest::prelude::*;

    fn uniform_sphere(radius: f64) -> RadialFunction {
        let grid = RadialGrid::new(radius, 401).unwrap();
        let rho0 = 3.0 / (4.0 * PI * radius.powi(3));
        grid.sample(|_| rho0).unwrap()
    }

    fn gaussian(width: f64, extent: f64, n: usize) -> RadialFunction {
        let grid = RadialGrid::new(extent, n).unwrap();
        let norm = (2.0 * PI * width * width).powf(-1.5);
        grid.sample(|r| norm * (-r * r / (2.0 * width * width)).exp())
            .unwrap()
    }

    #[test]
    fn uniform_sphere_matches_closed_form() {
        for &r in &[0.5, 1.0, 2.0, std::f64::consts::E, 10.0] {
            let s = entropy_position(&uniform_sphere(r)).unwrap();
            let want = (4.0 * PI / 3.0).ln() + 3.0 * r.ln();
            assert!((s - want).abs() < 1e-3, "r={r}");
        }
        assert!((entropy_position(&uniform_sphere(1.0)).unwrap() - 1.432).abs() < 1e-3);
        let e = std::f64::consts::E;
        assert!((entropy_position(&uniform_sphere(e)).unwrap() - 4.432).abs() < 1e-3);
    }

    #[test]
    fn gaussian_differential_entropy() {
        let want = 1.5 * (1.0 + (2.0 * PI).ln());
        assert!((want - 4.25681).abs() < 1e-5);
        let s = entropy_position(&gaussian(1.0, 12.0, 2048)).unwrap();
        assert!((s - want).abs() < 1e-4);
        let s = entropy_momentum(&gaussian(1.0, 12.0, 2048)).unwrap();
        assert!((s - want).abs() < 1e-4);
    }

    #[test]
    fn filled_fermi_sphere() {
        let grid = RadialGrid::new(1.0, 301).unwrap();
        let vk = 4.0 * PI / 3.0;
        let n_k = grid.sample(|_| 1.0 / vk).unwrap();
        let s = entropy_momentum(&n_k).unwrap();
        assert!((s - 1.43241).abs() < 1e-3);
    }

    #[test]
    fn single_sample_is_not_normalizable() {
        let grid = RadialGrid::new(1.0, 101).unwrap();
        let mut values = vec![0.0; 101];
        let w = grid.weights()[50];
        let r = grid.node(50);
        values[50] = 1.0 / (w * 4.0 * PI * r * r);
        let n_k = RadialFunction::new(grid, values).unwrap();
        assert!(matches!(
            entropy_momentum(&n_k),
            Err(Error::InvalidNormalization { .. })
        ));
    }

    #[test]
    fn negative_sample_is_invalid_density() {
        let grid = RadialGrid::new(1.0, 101).unwrap();
        let mut rho = vec![3.0 / (4.0 * PI); 101];
        rho[7] = -1e-3;
        let rho = RadialFunction::new(grid, rho).unwrap();
        assert_eq!(
            entropy_position(&rho),
            Err(Error::InvalidDensity {
                index: 7,
                value: -1e-3
            })
        );
    }

    #[test]
    fn normalization_error_reports_integral() {
        let rho = uniform_sphere(1.0).scaled(2.0).unwrap();
        match entropy_position(&rho) {
            Err(Error::InvalidNormalization { integral }) => {
                assert!((integral - 2.0).abs() < 1e-10)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sum_examples() {
        let r = entropy_sum(3.217095, 3.217095, 1);
        assert!((r.s_total - 6.43419).abs() < 1e-5);
        assert!(r.eur_margin.abs() < 1e-5);
        let r = entropy_sum(4.820, 4.605, 100);
        assert!((r.s_total - 9.425).abs() < 1e-12);
        let r = entropy_sum(0.0, 0.0, 1);
        assert!((r.eur_margin + 6.43419).abs() < 1e-5);
        assert!(r.violates_eur(1e-3));
    }

    #[test]
    fn normalization_transforms() {
        assert!((to_norm_n(6.434, 1, EntropyKind::Sum).unwrap() - 6.434).abs() < 1e-15);
        assert!((to_norm_1(6.434, 1, EntropyKind::Sum).unwrap() - 6.434).abs() < 1e-15);
        let st = to_norm_n(9.425, 100, EntropyKind::Sum).unwrap();
        assert!((st - (942.5 - 200.0 * 100f64.ln())).abs() < 1e-10);
        assert!((st - 21.46).abs() < 1e-2);
        for n in [10usize, 100] {
            let nf = n as f64;
            let s_tilde = -5.59 * nf - 2.0 * nf * nf.ln();
            let s = to_norm_1(s_tilde, n, EntropyKind::Position).unwrap();
            assert!((s - (-5.59 - nf.ln())).abs() < 1e-3);
        }
        assert!(to_norm_n(1.0, 0, EntropyKind::Sum).is_err());
        assert!(to_norm_1(1.0, 0, EntropyKind::Position).is_err());
    }

    proptest! {
        #[test]
        fn transforms_are_inverse(s in -50.0f64..50.0, n in 1usize..100_000) {
            for kind in [EntropyKind::Position, EntropyKind::Momentum, EntropyKind::Sum] {
                let back = to_norm_1(to_norm_n(s, n, kind).unwrap(), n, kind).unwrap();
                prop_assert!((back - s).abs() < 1e-12 * (1.0 + s.abs() + (n as f64).ln()));
            }
        }

        #[test]
        fn entropy_sum_is_scale_invariant(lambda in 0.25f64..4.0) {
            // hydrogen-like pair: rho ~ e^{-2r}, n ~ (1+k^2)^{-4}
            let pts = 4001;
            let rho = |r: f64| (-2.0 * r).exp() / PI;
            let nk = |k: f64| 8.0 / (PI * PI) / (1.0 + k * k).powi(4);
            let gr = RadialGrid::new(30.0, pts).unwrap();
            let gk = RadialGrid::new(60.0, pts).unwrap();
            let base = entropy_position(&gr.sample(rho).unwrap()).unwrap()
                + entropy_momentum(&gk.sample(nk).unwrap()).unwrap();
            let gr_s = RadialGrid::new(30.0 / lambda, pts).unwrap();
            let gk_s = RadialGrid::new(60.0 * lambda, pts).unwrap();
            let l3 = lambda.powi(3);
            let scaled = entropy_position(&gr_s.sample(|r| l3 * rho(lambda * r)).unwrap()).unwrap()
                + entropy_momentum(&gk_s.sample(|k| nk(k / lambda) / l3).unwrap()).unwrap();
            prop_assert!((scaled - base).abs() < 1e-6);
        }
    }
}
