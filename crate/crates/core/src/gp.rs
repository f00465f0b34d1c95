//! Ground state of a repulsive condensate in an isotropic harmonic trap.
//!
//! Everything is in trap units: lengths in `b = (hbar / m omega)^{1/2}`,
//! energies in `hbar omega`. With the order parameter normalized to one the
//! stationary equation reads
//!
//! ```text
//! [-1/2 laplacian + r^2 / 2 + g |psi|^2] psi = mu psi,   g = 4 pi N a_s / b
//! ```
//!
//! and is solved by backward-Euler imaginary-time steps on the reduced
//! amplitude `u = sqrt(4 pi) r psi`, renormalizing after each step.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::entropy::{entropy_momentum, entropy_position, entropy_sum, EntropyResult};
use crate::error::{Error, Result};
use crate::numerics::{radial_fourier, RadialFunction, RadialGrid};

/// 87Rb scattering length used with the default trap, A.
pub const RB87_SCATTERING_LENGTH: f64 = 52.9;
/// Oscillator length of the default trap, A.
pub const TRAP_LENGTH: f64 = 12180.0;

const INITIAL_STEP: f64 = 1e-3;
const MAX_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-9;
const STEP_GROWTH: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpSpec {
    pub n_atoms: usize,
    /// `a_s`, A.
    pub scattering_length: f64,
    /// `b`, A.
    pub trap_length_b: f64,
    /// Radial mesh in units of `b`.
    pub grid: RadialGrid,
    /// Relative change of `mu` per accepted step below which the state counts
    /// as converged.
    pub convergence_tol: f64,
    pub max_steps: usize,
}

impl GpSpec {
    /// 87Rb in the default trap on a `16 b` mesh.
    pub fn rubidium(n_atoms: usize) -> Self {
        Self {
            n_atoms,
            scattering_length: RB87_SCATTERING_LENGTH,
            trap_length_b: TRAP_LENGTH,
            grid: RadialGrid::new(16.0, 8193).expect("static grid"),
            convergence_tol: 1e-9,
            max_steps: 200_000,
        }
    }

    pub fn with_atoms(mut self, n_atoms: usize) -> Self {
        self.n_atoms = n_atoms;
        self
    }

    pub fn with_grid(mut self, grid: RadialGrid) -> Self {
        self.grid = grid;
        self
    }

    /// Dimensionless coupling `g = 4 pi N a_s / b`.
    pub fn coupling(&self) -> f64 {
        4.0 * PI * self.scattering_length / self.trap_length_b * self.n_atoms as f64
    }

    /// Thomas-Fermi chemical potential `(15 N a_s / b)^{2/5} / 2`.
    pub fn thomas_fermi_mu(&self) -> f64 {
        0.5 * (15.0 * self.n_atoms as f64 * self.scattering_length / self.trap_length_b).powf(0.4)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms < 1 {
            return Err(Error::invalid("condensate needs at least one atom"));
        }
        if !(self.trap_length_b.is_finite() && self.trap_length_b > 0.0) {
            return Err(Error::invalid(format!(
                "trap length must be positive, got {}",
                self.trap_length_b
            )));
        }
        if !self.scattering_length.is_finite() {
            return Err(Error::invalid("scattering length must be finite"));
        }
        if self.scattering_length < 0.0 {
            return Err(Error::Unsupported(format!(
                "attractive interaction (a_s = {}) collapses; only a_s >= 0 is supported",
                self.scattering_length
            )));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::invalid("convergence tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpGroundState {
    /// Order parameter, `int psi^2 4 pi r^2 dr = 1`, non-negative.
    pub psi: RadialFunction,
    pub chemical_potential_mu: f64,
    /// `sqrt(<r^2>)` in units of `b`.
    pub rms_radius: f64,
    pub energy_per_particle: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub interaction: f64,
    pub steps: usize,
    pub trap_length_b: f64,
}

impl GpGroundState {
    pub fn rms_radius_angstrom(&self) -> f64 {
        self.rms_radius * self.trap_length_b
    }

    /// `u = sqrt(4 pi) r psi`, normalized as `int u^2 dr = 1`.
    pub fn reduced_amplitude(&self) -> Result<RadialFunction> {
        let grid = *self.psi.grid();
        let c = (4.0 * PI).sqrt();
        let values = self
            .psi
            .values()
            .iter()
            .enumerate()
            .map(|(i, p)| c * grid.node(i) * p)
            .collect();
        RadialFunction::new(grid, values)
    }
}

// Terms of the energy functional for a reduced amplitude with h-sum norm.
struct Terms {
    kinetic: f64,
    potential: f64,
    interaction: f64,
}

impl Terms {
    fn energy(&self) -> f64 {
        self.kinetic + self.potential + 0.5 * self.interaction
    }

    fn mu(&self) -> f64 {
        self.kinetic + self.potential + self.interaction
    }
}

struct Propagator {
    h: f64,
    r: Vec<f64>,
    g: f64,
}

impl Propagator {
    // |psi|^2 at interior node i from the reduced amplitude
    fn density(&self, u: &[f64], i: usize) -> f64 {
        u[i] * u[i] / (4.0 * PI * self.r[i] * self.r[i])
    }

    fn terms(&self, u: &[f64]) -> Terms {
        let n = u.len();
        let h = self.h;
        let norm: f64 = u.iter().map(|v| v * v).sum::<f64>() * h;
        let mut kinetic = 0.0;
        for i in 0..n - 1 {
            kinetic += (u[i + 1] - u[i]).powi(2);
        }
        kinetic *= 0.5 / h;
        let mut potential = 0.0;
        let mut interaction = 0.0;
        for i in 1..n - 1 {
            potential += 0.5 * self.r[i] * self.r[i] * u[i] * u[i];
            interaction += self.g * self.density(u, i) * u[i] * u[i];
        }
        Terms {
            kinetic: kinetic / norm,
            potential: potential * h / norm,
            interaction: interaction * h / norm,
        }
    }

    /// One backward-Euler step `(1 + dt H[u]) u' = u` on the interior nodes.
    fn step(&self, u: &[f64], dt: f64) -> Vec<f64> {
        let n = u.len();
        let off = -dt / (2.0 * self.h * self.h);
        let m = n - 2;
        let mut diag = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for i in 1..n - 1 {
            let v = 0.5 * self.r[i] * self.r[i] + self.g * self.density(u, i);
            diag.push(1.0 + dt * (1.0 / (self.h * self.h) + v));
            rhs.push(u[i]);
        }
        // Thomas algorithm, constant off-diagonal
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = off / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..m {
            let denom = diag[i] - off * c[i - 1];
            c[i] = off / denom;
            d[i] = (rhs[i] - off * d[i - 1]) / denom;
        }
        let mut out = vec![0.0; n];
        out[m] = d[m - 1];
        for i in (0..m - 1).rev() {
            out[i + 1] = d[i] - c[i] * out[i + 2];
        }
        out
    }

    fn residual(&self, u: &[f64], mu: f64) -> f64 {
        let n = u.len();
        let h = self.h;
        let mut sum = 0.0;
        for i in 1..n - 1 {
            let lap = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
            let v = 0.5 * self.r[i] * self.r[i] + self.g * self.density(u, i);
            sum += (-0.5 * lap + (v - mu) * u[i]).powi(2);
        }
        (sum * h).sqrt()
    }
}

fn normalize(grid: &RadialGrid, u: &mut [f64]) {
    let w = grid.weights();
    let norm: f64 = u.iter().zip(&w).map(|(v, w)| w * v * v).sum::<f64>().sqrt();
    for v in u.iter_mut() {
        *v /= norm;
    }
}

fn initial_guess(spec: &GpSpec) -> Vec<f64> {
    let g = spec.coupling();
    let mu_tf = 0.5 * (15.0 * g / (4.0 * PI)).powf(0.4);
    spec.grid
        .nodes()
        .map(|r| {
            let gauss = (-r * r / 2.0).exp();
            if g > 10.0 {
                r * (((mu_tf - 0.5 * r * r).max(0.0) / g).sqrt() + 1e-3 * gauss)
            } else {
                r * gauss
            }
        })
        .collect()
}

/// Nodeless ground state by imaginary-time propagation.
///
/// The step starts at `1e-3`, grows by 20% after each accepted step up to
/// `0.5`, and is halved (and the step retried) whenever the energy rises.
pub fn gp_ground_state(spec: &GpSpec) -> Result<GpGroundState> {
    spec.validate()?;
    let grid = spec.grid;
    let n = grid.n_points();
    let prop = Propagator {
        h: grid.spacing(),
        r: grid.nodes().collect(),
        g: spec.coupling(),
    };

    let mut u = initial_guess(spec);
    u[0] = 0.0;
    u[n - 1] = 0.0;
    normalize(&grid, &mut u);
    let mut terms = prop.terms(&u);
    let mut dt = INITIAL_STEP;
    let mut steps = 0;
    let mut converged = false;

    while steps < spec.max_steps {
        let mut next = prop.step(&u, dt);
        normalize(&grid, &mut next);
        let next_terms = prop.terms(&next);
        if next_terms.energy() > terms.energy() + 1e-15 * terms.energy().abs() && dt > MIN_STEP {
            dt *= 0.5;
            continue;
        }
        steps += 1;
        let change = ((next_terms.mu() - terms.mu()) / next_terms.mu()).abs();
        u = next;
        terms = next_terms;
        dt = (dt * STEP_GROWTH).min(MAX_STEP);
        if change < spec.convergence_tol && prop.residual(&u, terms.mu()) < 1e-6 * terms.mu() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence(format!(
            "imaginary-time propagation did not converge in {} steps (N = {})",
            spec.max_steps, spec.n_atoms
        )));
    }

    let c = 1.0 / (4.0 * PI).sqrt();
    let mut psi: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                0.0
            } else {
                c * u[i].abs() / prop.r[i]
            }
        })
        .collect();
    psi[0] = ((4.0 * psi[1] - psi[2]) / 3.0).max(0.0);
    let w = grid.weights();
    let r2: f64 = (0..n)
        .map(|i| w[i] * prop.r[i] * prop.r[i] * u[i] * u[i])
        .sum();

    Ok(GpGroundState {
        psi: RadialFunction::new(grid, psi)?,
        chemical_potential_mu: terms.mu(),
        rms_radius: r2.sqrt(),
        energy_per_particle: terms.energy(),
        kinetic: terms.kinetic,
        potential: terms.potential,
        interaction: terms.interaction,
        steps,
        trap_length_b: spec.trap_length_b,
    })
}

/// Momentum mesh resolving both the condensate width and the healing length.
pub fn momentum_grid(state: &GpGroundState) -> Result<RadialGrid> {
    let k_max = (4.0 * (2.0 * state.chemical_potential_mu).sqrt()).max(8.0);
    RadialGrid::with_max_spacing(k_max, 0.005)
}

/// One-normalized densities `rho = |psi|^2` and `n(k)`.
pub fn gp_densities(state: &GpGroundState) -> Result<(RadialFunction, RadialFunction)> {
    gp_densities_on(state, &momentum_grid(state)?)
}

pub fn gp_densities_on(
    state: &GpGroundState,
    k_grid: &RadialGrid,
) -> Result<(RadialFunction, RadialFunction)> {
    let rho = RadialFunction::new(
        *state.psi.grid(),
        state.psi.values().iter().map(|p| p * p).collect(),
    )?;
    let phi = radial_fourier(&state.reduced_amplitude()?, 0, k_grid)?;
    let n_k = RadialFunction::new(
        *k_grid,
        phi.values().iter().map(|p| p * p / (4.0 * PI)).collect(),
    )?;
    Ok((rho, n_k))
}

pub fn gp_entropy(state: &GpGroundState, n_atoms: usize) -> Result<EntropyResult> {
    let (rho, n_k) = gp_densities(state)?;
    Ok(entropy_sum(
        entropy_position(&rho)?,
        entropy_momentum(&n_k)?,
        n_atoms,
    ))
}

/// Entropy and size of one condensate in a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpScanPoint {
    pub entropy: EntropyResult,
    pub chemical_potential_mu: f64,
    /// In units of `b`.
    pub rms_radius: f64,
    pub rms_radius_angstrom: f64,
}

/// Particle numbers accepted by [`gp_entropy_scan`].
pub const SCAN_RANGE: (usize, usize) = (500, 1_000_000);

pub fn gp_entropy_scan(n_list: &[usize], base: &GpSpec) -> Result<Vec<GpScanPoint>> {
    if n_list.is_empty() {
        return Err(Error::invalid("empty particle-number list"));
    }
    if let Some(&n) = n_list
        .iter()
        .find(|&&n| n < SCAN_RANGE.0 || n > SCAN_RANGE.1)
    {
        return Err(Error::at(
            n,
            Error::invalid(format!(
                "scan covers {} <= N <= {}",
                SCAN_RANGE.0, SCAN_RANGE.1
            )),
        ));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            let run = || -> Result<GpScanPoint> {
                let state = gp_ground_state(&base.with_atoms(n))?;
                Ok(GpScanPoint {
                    entropy: gp_entropy(&state, n)?,
                    chemical_potential_mu: state.chemical_potential_mu,
                    rms_radius: state.rms_radius,
                    rms_radius_angstrom: state.rms_radius_angstrom(),
                })
            };
            run().map_err(|e| Error::at(n, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_radial;

    fn ideal(n: usize) -> GpSpec {
        GpSpec {
            scattering_length: 0.0,
            ..GpSpec::rubidium(n)
        }
    }

    #[test]
    fn ideal_gas_is_the_oscillator_ground_state() {
        let st = gp_ground_state(&ideal(1000)).unwrap();
        assert!((st.chemical_potential_mu - 1.5).abs() < 1e-6);
        assert!((st.rms_radius - 1.5f64.sqrt()).abs() < 1e-5);
        assert!((st.kinetic - 0.75).abs() < 1e-5);
        assert!((st.potential - 0.75).abs() < 1e-5);
        let grid = *st.psi.grid();
        for (i, p) in st.psi.values().iter().enumerate().step_by(97) {
            let r = grid.node(i);
            let want = PI.powf(-0.75) * (-r * r / 2.0).exp();
            assert!((p - want).abs() < 1e-5, "r={r}");
        }
    }

    #[test]
    fn ideal_gas_from_a_wrong_start_still_converges() {
        let spec = ideal(1);
        let grid = spec.grid;
        let prop = Propagator {
            h: grid.spacing(),
            r: grid.nodes().collect(),
            g: 0.0,
        };
        // broad start, then propagate by hand
        let mut u: Vec<f64> = grid.nodes().map(|r| r * (-r * r / 8.0).exp()).collect();
        normalize(&grid, &mut u);
        let mut dt = INITIAL_STEP;
        let mut energy = prop.terms(&u).energy();
        for _ in 0..400 {
            let mut next = prop.step(&u, dt);
            normalize(&grid, &mut next);
            let w = grid.weights();
            let norm: f64 = next.iter().zip(&w).map(|(v, w)| w * v * v).sum();
            assert!((norm - 1.0).abs() < 1e-10);
            let e = prop.terms(&next).energy();
            assert!(e <= energy + 1e-12);
            energy = e;
            u = next;
            dt = (dt * STEP_GROWTH).min(MAX_STEP);
        }
        assert!((prop.terms(&u).mu() - 1.5).abs() < 1e-6);
    }

    #[test]
    fn state_invariants() {
        let st = gp_ground_state(&GpSpec::rubidium(5000)).unwrap();
        assert!(st.psi.values().iter().all(|p| *p >= 0.0));
        let rho = RadialFunction::new(
            *st.psi.grid(),
            st.psi.values().iter().map(|p| p * p).collect(),
        )
        .unwrap();
        assert!((integrate_radial(&rho).unwrap() - 1.0).abs() < 1e-8);
        assert!(st.chemical_potential_mu >= 1.5);
        let (rho, _) = gp_densities(&st).unwrap();
        let peak = rho
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(peak, 0);
    }

    #[test]
    fn thomas_fermi_regime() {
        let spec = GpSpec::rubidium(10_000);
        assert!((spec.thomas_fermi_mu() - 6.676).abs() < 1e-2);
        let st = gp_ground_state(&spec).unwrap();
        assert!((st.chemical_potential_mu - 6.87).abs() < 0.687);
        let bigger = gp_ground_state(&GpSpec::rubidium(100_000)).unwrap();
        assert!(bigger.chemical_potential_mu > st.chemical_potential_mu);
    }

    #[test]
    fn rms_radius_grows_with_n() {
        let radii: Vec<f64> = [500, 2000, 8000, 32000]
            .iter()
            .map(|&n| gp_ground_state(&GpSpec::rubidium(n)).unwrap().rms_radius)
            .collect();
        assert!(radii.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn ideal_gas_saturates_the_uncertainty_bound() {
        let st = gp_ground_state(&ideal(1000)).unwrap();
        let e = gp_entropy(&st, 1000).unwrap();
        assert!((e.s_total - 6.4342).abs() < 1e-2);
        assert!(e.eur_margin > -1e-3);
    }

    #[test]
    fn momentum_density_is_normalized() {
        let st = gp_ground_state(&GpSpec::rubidium(10_000)).unwrap();
        let (_, n_k) = gp_densities(&st).unwrap();
        assert!((integrate_radial(&n_k).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn attractive_and_invalid_specs() {
        let spec = GpSpec {
            scattering_length: -5.0,
            ..GpSpec::rubidium(100)
        };
        assert!(matches!(gp_ground_state(&spec), Err(Error::Unsupported(_))));
        assert!(gp_ground_state(&GpSpec::rubidium(0)).is_err());
        let spec = GpSpec {
            max_steps: 3,
            ..GpSpec::rubidium(50_000)
        };
        assert!(matches!(gp_ground_state(&spec), Err(Error::Convergence(_))));
    }

    #[test]
    fn scan_rejects_out_of_range_n() {
        match gp_entropy_scan(&[1000, 10], &GpSpec::rubidium(1)) {
            Err(Error::AtParticleNumber { n, .. }) => assert_eq!(n, 10),
            other => panic!("{other:?}"),
        }
    }
}
