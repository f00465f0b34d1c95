//! Closed-form entropies: the ideal infinite Fermi gas, the classical uniform
//! sphere, and the Bose and Fermi cell-gas entropies written in terms of the
//! occupancy `x = N / n` (particles per phase-space cell).

use std::f64::consts::PI;

use crate::entropy::{entropy_sum, EntropyResult};
use crate::error::{Error, Result};

/// Ideal, uncorrelated, infinite Fermi system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiGasSpec {
    /// Single-particle level degeneracy: 2 for the electron gas and liquid
    /// helium-3, 4 for nuclear matter.
    pub degeneracy_nu: u32,
    /// Radius of the volume per particle, `V / N = (4/3) pi r0^3`.
    pub r0: f64,
    pub n_particles: usize,
}

impl FermiGasSpec {
    pub fn new(degeneracy_nu: u32, r0: f64, n_particles: usize) -> Result<Self> {
        let spec = Self {
            degeneracy_nu,
            r0,
            n_particles,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.degeneracy_nu != 2 && self.degeneracy_nu != 4 {
            return Err(Error::invalid(format!(
                "degeneracy must be 2 or 4, got {}",
                self.degeneracy_nu
            )));
        }
        if !(self.r0.is_finite() && self.r0 > 0.0) {
            return Err(Error::invalid(format!(
                "r0 must be positive, got {}",
                self.r0
            )));
        }
        if self.n_particles < 1 {
            return Err(Error::invalid("particle number must be at least 1"));
        }
        Ok(())
    }

    /// `k_F = (9 pi / (2 nu r0^3))^{1/3}`.
    pub fn fermi_wave_number(&self) -> f64 {
        (9.0 * PI / (2.0 * self.degeneracy_nu as f64 * self.r0.powi(3))).cbrt()
    }
}

/// `S_r = ln(4/3 pi r0^3) + ln N`, `S_k = ln(6 pi^2 / (nu r0^3))`; the sum
/// `ln(8 pi^3 / nu) + ln N` does not depend on `r0`.
pub fn fermi_gas_entropy(spec: &FermiGasSpec) -> Result<EntropyResult> {
    spec.validate()?;
    let nu = spec.degeneracy_nu as f64;
    let r3 = spec.r0.powi(3);
    let n = spec.n_particles as f64;
    let s_r = (4.0 / 3.0 * PI * r3).ln() + n.ln();
    let s_k = (6.0 * PI * PI / (nu * r3)).ln();
    Ok(entropy_sum(s_r, s_k, spec.n_particles))
}

/// Slater function `l(x) = 3 (sin x - x cos x) / x^3` of the free-fermion
/// one-body density matrix, `l(0) = 1`.
pub fn fermi_obdm_l(x: f64) -> f64 {
    let x = x.abs();
    if x < 0.1 {
        let x2 = x * x;
        1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0
    } else {
        3.0 * (x.sin() - x * x.cos()) / x.powi(3)
    }
}

/// Entropy of a uniform, one-normalized sphere: `ln(4 pi / 3) + 3 ln r`.
pub fn classical_sphere_entropy(radius: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::invalid(format!(
            "radius must be positive, got {radius}"
        )));
    }
    Ok((4.0 * PI / 3.0).ln() + 3.0 * radius.ln())
}

/// Same entropy with the constant-density radius law `r = r0 N^{1/3}`:
/// `(ln(4 pi / 3) + 3 ln r0) + ln N`.
pub fn classical_sphere_entropy_for(r0: f64, n: usize) -> Result<f64> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::invalid(format!("r0 must be positive, got {r0}")));
    }
    if n < 1 {
        return Err(Error::invalid("particle number must be at least 1"));
    }
    Ok((4.0 * PI / 3.0).ln() + 3.0 * r0.ln() + (n as f64).ln())
}

/// Boltzmann constant in J/K, for callers that want SI entropies.
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;

/// Ideal quantum gas described by its cell occupancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGasSpec {
    /// `x = N / n`, average number of particles per cell.
    pub occupancy: f64,
    pub n_particles: f64,
    pub k_b: f64,
}

impl CellGasSpec {
    pub fn new(occupancy: f64, n_particles: f64) -> Self {
        Self {
            occupancy,
            n_particles,
            k_b: 1.0,
        }
    }

    pub fn with_kb(mut self, k_b: f64) -> Self {
        self.k_b = k_b;
        self
    }

    fn check_common(&self) -> Result<()> {
        if !(self.occupancy.is_finite() && self.occupancy > 0.0) {
            return Err(Error::invalid(format!(
                "occupancy must be positive, got {}",
                self.occupancy
            )));
        }
        if !(self.n_particles.is_finite() && self.n_particles > 0.0) {
            return Err(Error::invalid(format!(
                "particle number must be positive, got {}",
                self.n_particles
            )));
        }
        if !(self.k_b.is_finite() && self.k_b > 0.0) {
            return Err(Error::invalid(format!(
                "k_B must be positive, got {}",
                self.k_b
            )));
        }
        Ok(())
    }
}

/// Which cell-gas statistics to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatistics {
    Bose,
    Fermi,
}

/// Bose gas: `S = N k_B [ (1/x) ln(1 + x) + ln(1 + 1/x) ]`.
pub fn bose_cell_entropy(spec: &CellGasSpec) -> Result<f64> {
    spec.check_common()?;
    let x = spec.occupancy;
    Ok(spec.n_particles * spec.k_b * (x.ln_1p() / x + (1.0 / x).ln_1p()))
}

/// Fermi gas: `S = N k_B [ ln(1/x - 1) - (1/x) ln(1 - x) ]`, `0 < x < 1`.
pub fn fermi_cell_entropy(spec: &CellGasSpec) -> Result<f64> {
    spec.check_common()?;
    let x = spec.occupancy;
    if x >= 1.0 {
        return Err(Error::Domain(format!(
            "Fermi occupancy must be below 1 (ln(n/N - 1) undefined), got {x}"
        )));
    }
    Ok(spec.n_particles * spec.k_b * ((1.0 / x - 1.0).ln() - (-x).ln_1p() / x))
}

pub fn cell_entropy(stats: CellStatistics, spec: &CellGasSpec) -> Result<f64> {
    match stats {
        CellStatistics::Bose => bose_cell_entropy(spec),
        CellStatistics::Fermi => fermi_cell_entropy(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fermi_gas_intercepts() {
        let s = fermi_gas_entropy(&FermiGasSpec::new(2, 1.7, 1).unwrap()).unwrap();
        assert!((s.s_total - 4.820).abs() < 1e-3);
        let s = fermi_gas_entropy(&FermiGasSpec::new(4, 0.3, 1).unwrap()).unwrap();
        assert!((s.s_total - 4.127).abs() < 1e-3);
        let s = fermi_gas_entropy(&FermiGasSpec::new(2, 1.0, 100).unwrap()).unwrap();
        assert!((s.s_total - 9.4257).abs() < 1e-3);
        assert!(FermiGasSpec::new(3, 1.0, 1).is_err());
    }

    #[test]
    fn fermi_gas_momentum_entropy_is_ln_of_fermi_volume() {
        let spec = FermiGasSpec::new(2, 2.25, 10).unwrap();
        let kf = spec.fermi_wave_number();
        let s = fermi_gas_entropy(&spec).unwrap();
        assert!((s.s_k - (4.0 / 3.0 * PI * kf.powi(3)).ln()).abs() < 1e-12);
    }

    #[test]
    fn sum_does_not_depend_on_r0() {
        for nu in [2, 4] {
            let totals: Vec<f64> = [0.5, 1.0, 2.25]
                .iter()
                .map(|&r0| {
                    fermi_gas_entropy(&FermiGasSpec::new(nu, r0, 17).unwrap())
                        .unwrap()
                        .s_total
                })
                .collect();
            assert!(totals.iter().all(|t| (t - totals[0]).abs() < 1e-12));
        }
    }

    // first positive root of tan x = x, i.e. of sin x - x cos x
    fn slater_root() -> f64 {
        let f = |x: f64| x.sin() - x * x.cos();
        let (mut lo, mut hi) = (4.0, 4.7);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn slater_function_values() {
        assert_eq!(fermi_obdm_l(0.0), 1.0);
        assert!((fermi_obdm_l(PI) - 3.0 / (PI * PI)).abs() < 1e-10);
        let root = slater_root();
        assert!((root - 4.4934).abs() < 1e-4);
        assert!(fermi_obdm_l(4.4934).abs() < 1e-3);
        assert!(fermi_obdm_l(root).abs() < 1e-12);
        // continuity across the series switch
        assert!((fermi_obdm_l(0.1 - 1e-12) - fermi_obdm_l(0.1 + 1e-12)).abs() < 1e-10);
    }

    #[test]
    fn classical_sphere_forms() {
        assert!((classical_sphere_entropy(1.0).unwrap() - 1.43241).abs() < 1e-3);
        assert!((classical_sphere_entropy_for(1.0, 8).unwrap() - 3.512).abs() < 1e-3);
        let r0 = 2.25;
        for n in [1usize, 8, 27, 1000] {
            let by_radius = classical_sphere_entropy(r0 * (n as f64).cbrt()).unwrap();
            let by_count = classical_sphere_entropy_for(r0, n).unwrap();
            assert!((by_radius - by_count).abs() < 1e-12);
        }
        assert!(classical_sphere_entropy(0.0).is_err());
        assert!(classical_sphere_entropy_for(1.0, 0).is_err());
        assert!(classical_sphere_entropy_for(-1.0, 3).is_err());
    }

    #[test]
    fn classical_sphere_slope_is_exactly_one() {
        for n in [1usize, 7, 100, 12345] {
            let d = classical_sphere_entropy_for(1.3, 2 * n).unwrap()
                - classical_sphere_entropy_for(1.3, n).unwrap();
            assert!((d - 2f64.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn bose_cell_examples() {
        let s = bose_cell_entropy(&CellGasSpec::new(1.0, 1.0)).unwrap();
        assert!((s - 2.0 * 2f64.ln()).abs() < 1e-10);
        let s = bose_cell_entropy(&CellGasSpec::new(1e-6, 1.0)).unwrap();
        assert!((s - 14.8155).abs() < 1e-3);
        assert!((s - (1.0 + 1e6f64.ln())).abs() < 1e-5);
        let lo = bose_cell_entropy(&CellGasSpec::new(0.1, 1.0)).unwrap();
        let hi = bose_cell_entropy(&CellGasSpec::new(1.0, 1.0)).unwrap();
        assert!(lo > hi);
        assert!(bose_cell_entropy(&CellGasSpec::new(0.0, 1.0)).is_err());
        assert!(bose_cell_entropy(&CellGasSpec::new(-1.0, 1.0)).is_err());
    }

    #[test]
    fn fermi_cell_examples() {
        let s = fermi_cell_entropy(&CellGasSpec::new(0.5, 1.0)).unwrap();
        assert!((s - 2.0 * 2f64.ln()).abs() < 1e-10);
        let f = fermi_cell_entropy(&CellGasSpec::new(1e-6, 1.0)).unwrap();
        let b = bose_cell_entropy(&CellGasSpec::new(1e-6, 1.0)).unwrap();
        assert!(((f - b) / b).abs() < 1e-5);
        assert!(matches!(
            fermi_cell_entropy(&CellGasSpec::new(1.0, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cell_entropy_scales_with_n_and_kb() {
        let base = bose_cell_entropy(&CellGasSpec::new(0.3, 1.0)).unwrap();
        let s = bose_cell_entropy(&CellGasSpec::new(0.3, 5.0).with_kb(BOLTZMANN_SI)).unwrap();
        assert!((s / (5.0 * BOLTZMANN_SI) - base).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn slater_function_is_bounded(x in 0.0f64..500.0) {
            prop_assert!(fermi_obdm_l(x).abs() <= 1.0);
        }

        #[test]
        fn cell_gases_share_the_classical_limit(exp in 3.0f64..9.0) {
            let x = 10f64.powf(-exp);
            let b = bose_cell_entropy(&CellGasSpec::new(x, 1.0)).unwrap();
            let f = fermi_cell_entropy(&CellGasSpec::new(x, 1.0)).unwrap();
            prop_assert!((b - f).abs() / b < x);
        }
    }
}
