//! Valence electrons of a spherical metallic cluster in a Woods-Saxon mean
//! field.
//!
//! Bound states come from Numerov integration of the radial equation
//! `u'' = [(V - E) / c + l(l+1) / r^2] u` (with `c = hbar^2 / 2m`) and
//! bisection on the energy using the node count of the outward solution.
//! Levels are filled in energy order and the resulting densities are
//! transformed to momentum space orbital by orbital.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::entropy::{entropy_momentum, entropy_position, entropy_sum, EntropyResult};
use crate::error::{Error, Result};
use crate::numerics::{radial_fourier, RadialFunction, RadialGrid};

/// `hbar^2 / 2 m_e` in eV A^2.
pub const HBAR2_OVER_2M_ELECTRON: f64 = 3.8100;

const MAX_BISECTIONS: usize = 200;

/// Woods-Saxon well `V(r) = -V0 / (1 + exp((r - R) / a))` with `R = r0 N^{1/3}`.
///
/// Energies are in eV and lengths in angstrom; the defaults are the
/// parametrization for neutral sodium clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoodsSaxonSpec {
    pub v0: f64,
    pub r0: f64,
    pub diffuseness_a: f64,
    pub n_electrons: usize,
    pub hbar2_over_2m: f64,
}

impl WoodsSaxonSpec {
    pub fn sodium(n_electrons: usize) -> Self {
        Self {
            v0: 6.0,
            r0: 2.25,
            diffuseness_a: 0.74,
            n_electrons,
            hbar2_over_2m: HBAR2_OVER_2M_ELECTRON,
        }
    }

    pub fn with_electrons(mut self, n_electrons: usize) -> Self {
        self.n_electrons = n_electrons;
        self
    }

    pub fn well_radius(&self) -> f64 {
        self.r0 * (self.n_electrons as f64).cbrt()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v0", self.v0),
            ("r0", self.r0),
            ("diffuseness a", self.diffuseness_a),
            ("hbar^2/2m", self.hbar2_over_2m),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_electrons < 1 {
            return Err(Error::invalid("cluster needs at least one electron"));
        }
        Ok(())
    }
}

pub fn woods_saxon_potential(spec: &WoodsSaxonSpec, r: f64) -> f64 {
    let t = (r - spec.well_radius()) / spec.diffuseness_a;
    if t > 700.0 {
        // exp overflows; the well has vanished
        return -spec.v0 * (-t).exp();
    }
    -spec.v0 / (1.0 + t.exp())
}

/// Discretization of the cluster problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterOptions {
    pub l_max: usize,
    /// Radial mesh spacing, A.
    pub spacing: f64,
    /// Extent of the box beyond the well radius, A.
    pub tail: f64,
    /// Momentum cutoff in units of `sqrt(V0 / c)`, the wave number at the
    /// bottom of the well.
    pub k_max_factor: f64,
    /// Momentum mesh spacing, 1/A.
    pub k_spacing: f64,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        Self {
            l_max: 12,
            spacing: 0.02,
            tail: 30.0,
            k_max_factor: 8.0,
            k_spacing: 0.01,
        }
    }
}

impl ClusterOptions {
    pub fn refined(&self) -> Self {
        Self {
            spacing: self.spacing / 2.0,
            k_spacing: self.k_spacing / 2.0,
            ..*self
        }
    }

    pub fn radial_grid(&self, spec: &WoodsSaxonSpec) -> Result<RadialGrid> {
        let r_max = spec.well_radius() + self.tail;
        let intervals = 2 * (r_max / (2.0 * self.spacing)).round().max(32.0) as usize;
        RadialGrid::new(r_max, intervals + 1)
    }

    pub fn momentum_grid(&self, spec: &WoodsSaxonSpec) -> Result<RadialGrid> {
        let k_max = self.k_max_factor * (spec.v0 / spec.hbar2_over_2m).sqrt();
        let intervals = 2 * (k_max / (2.0 * self.k_spacing)).round().max(32.0) as usize;
        RadialGrid::new(k_max, intervals + 1)
    }
}

/// A single-particle bound level.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbital {
    /// Number of radial nodes, excluding the origin.
    pub n_radial: usize,
    pub l: usize,
    /// Eigenvalue in eV.
    pub energy: f64,
    /// Reduced radial amplitude `u = r R(r)` with `int u^2 dr = 1`, positive
    /// near the origin.
    pub u: RadialFunction,
    /// Electrons in this level, `0 ..= 2 (2l + 1)`.
    pub occupancy: f64,
}

impl Orbital {
    pub fn capacity(&self) -> f64 {
        (2 * (2 * self.l + 1)) as f64
    }

    /// Spectroscopic label such as `1s`, `2p`, `1d`.
    pub fn label(&self) -> String {
        const LETTERS: &[u8] = b"spdfghiklmnoq";
        let letter = LETTERS.get(self.l).map(|&c| c as char).unwrap_or('?');
        format!("{}{}", self.n_radial + 1, letter)
    }
}

struct Radial<'a> {
    spec: &'a WoodsSaxonSpec,
    grid: RadialGrid,
    potential: Vec<f64>,
    l: usize,
}

impl<'a> Radial<'a> {
    fn new(spec: &'a WoodsSaxonSpec, grid: RadialGrid, potential: Vec<f64>, l: usize) -> Self {
        Self {
            spec,
            grid,
            potential,
            l,
        }
    }

    // Q(r) = (V - E) / c + l(l+1) / r^2 ; Q is never needed at the origin
    fn q(&self, i: usize, energy: f64) -> f64 {
        let r = self.grid.node(i);
        let ll = (self.l * (self.l + 1)) as f64;
        (self.potential[i] - energy) / self.spec.hbar2_over_2m + ll / (r * r)
    }

    /// Outward Numerov solution from the origin up to node `last`, rescaled
    /// when it grows large. Returns the samples and the number of sign changes.
    fn outward(&self, energy: f64, last: usize) -> (Vec<f64>, usize) {
        let h2 = self.grid.spacing().powi(2) / 12.0;
        let mut u = vec![0.0; last + 1];
        // Numerov needs h^2 |Q| / 12 << 1; inside that the centrifugal term
        // dominates, so seed with the regular series r^{l+1} (1 + q r^2 / (2(2l+3))).
        let start = (((self.l * (self.l + 1)) as f64).sqrt().ceil() as usize)
            .max(1)
            .min(last);
        let power = self.l as i32 + 1;
        for (i, v) in u.iter_mut().enumerate().take(start + 1).skip(1) {
            let r = self.grid.node(i);
            let q0 = (self.potential[i] - energy) / self.spec.hbar2_over_2m;
            *v = r.powi(power) * (1.0 + q0 * r * r / (2.0 * (2 * self.l + 3) as f64));
        }
        let mut nodes = 0;
        // f_i = 1 - h^2 Q_i / 12
        let mut f_prev = if start > 1 {
            1.0 - h2 * self.q(start - 1, energy)
        } else {
            0.0
        };
        let mut f_cur = 1.0 - h2 * self.q(start, energy);
        for i in start..last {
            let f_next = 1.0 - h2 * self.q(i + 1, energy);
            let next = ((12.0 - 10.0 * f_cur) * u[i] - f_prev * u[i - 1]) / f_next;
            u[i + 1] = next;
            if next == 0.0 || next.signum() != u[i].signum() {
                nodes += 1;
            }
            if next.abs() > 1e150 {
                for v in u.iter_mut().take(i + 2) {
                    *v *= 1e-150;
                }
            }
            f_prev = f_cur;
            f_cur = f_next;
        }
        (u, nodes)
    }

    fn count_nodes(&self, energy: f64) -> usize {
        self.outward(energy, self.grid.n_points() - 1).1
    }

    /// Energy of the level with `n_radial` nodes, by bisection between `lo`
    /// (fewer nodes) and `hi` (more nodes).
    fn eigenvalue(&self, n_radial: usize, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
        for _ in 0..MAX_BISECTIONS {
            if hi - lo < tol {
                return Ok(0.5 * (lo + hi));
            }
            let mid = 0.5 * (lo + hi);
            if self.count_nodes(mid) > n_radial {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::Convergence(format!(
            "eigenvalue n_r={n_radial}, l={} not bracketed to {tol} eV after {MAX_BISECTIONS} bisections",
            self.l
        )))
    }

    /// Eigenfunction at a converged energy: outward to the outermost classical
    /// turning point, inward from the wall, matched in value there.
    fn eigenfunction(&self, energy: f64) -> Result<RadialFunction> {
        let n = self.grid.n_points();
        let turning = (2..n - 2)
            .rev()
            .find(|&i| self.q(i, energy) < 0.0)
            .unwrap_or(n / 2)
            .max(2);
        let (mut u, _) = self.outward(energy, turning);
        u.resize(n, 0.0);

        let h2 = self.grid.spacing().powi(2) / 12.0;
        let mut inward = vec![0.0; n];
        inward[n - 2] = 1e-30;
        for i in (turning + 1..n - 1).rev() {
            let f_next = 1.0 - h2 * self.q(i + 1, energy);
            let f_cur = 1.0 - h2 * self.q(i, energy);
            let f_prev = 1.0 - h2 * self.q(i - 1, energy);
            inward[i - 1] = ((12.0 - 10.0 * f_cur) * inward[i] - f_next * inward[i + 1]) / f_prev;
            if inward[i - 1].abs() > 1e150 {
                for v in inward[i - 1..].iter_mut() {
                    *v *= 1e-150;
                }
            }
        }
        if inward[turning] == 0.0 {
            return Err(Error::Convergence(format!(
                "inward solution vanished at the matching point (l={}, E={energy})",
                self.l
            )));
        }
        let scale = u[turning] / inward[turning];
        for i in turning + 1..n {
            u[i] = scale * inward[i];
        }
        let f = RadialFunction::new(self.grid, u)?;
        let norm = f.norm_squared().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Convergence(format!(
                "degenerate eigenfunction (l={}, E={energy})",
                self.l
            )));
        }
        let sign = if f.values()[1] < 0.0 { -1.0 } else { 1.0 };
        f.scaled(sign / norm)
    }
}

/// All bound levels with `l <= l_max`, sorted by energy.
pub fn solve_bound_states(spec: &WoodsSaxonSpec, l_max: usize) -> Result<Vec<Orbital>> {
    let options = ClusterOptions {
        l_max,
        ..ClusterOptions::default()
    };
    solve_bound_states_with(spec, &options)
}

/// Eigenvalue tolerance, eV.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

pub fn solve_bound_states_with(
    spec: &WoodsSaxonSpec,
    options: &ClusterOptions,
) -> Result<Vec<Orbital>> {
    spec.validate()?;
    let grid = options.radial_grid(spec)?;
    let potential: Vec<f64> = grid
        .nodes()
        .map(|r| woods_saxon_potential(spec, r))
        .collect();
    let mut orbitals = Vec::new();
    for l in 0..=options.l_max {
        let radial = Radial::new(spec, grid, potential.clone(), l);
        let bound = radial.count_nodes(0.0);
        let mut lo = -spec.v0;
        for n_radial in 0..bound {
            let energy = radial.eigenvalue(n_radial, lo, 0.0, ENERGY_TOLERANCE)?;
            let u = radial.eigenfunction(energy)?;
            orbitals.push(Orbital {
                n_radial,
                l,
                energy,
                u,
                occupancy: 0.0,
            });
            lo = energy;
        }
    }
    orbitals.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.l.cmp(&b.l)));
    Ok(orbitals)
}

/// Fill `n` electrons into the levels in order, the last one fractionally.
fn fill(orbitals: &mut [Orbital], n: usize) -> Result<()> {
    let max_supported: f64 = orbitals.iter().map(Orbital::capacity).sum();
    if (n as f64) > max_supported {
        return Err(Error::Capacity {
            requested: n,
            max_supported: max_supported as usize,
        });
    }
    let mut left = n as f64;
    for orb in orbitals.iter_mut() {
        orb.occupancy = orb.capacity().min(left);
        left -= orb.occupancy;
    }
    Ok(())
}

/// Ground-state configuration of a cluster.
#[derive(Debug, Clone)]
pub struct ClusterDensities {
    /// One-normalized electron density in position space.
    pub rho: RadialFunction,
    /// One-normalized momentum distribution.
    pub n_k: RadialFunction,
    /// Occupied levels in energy order.
    pub orbitals: Vec<Orbital>,
}

pub fn cluster_densities(spec: &WoodsSaxonSpec) -> Result<ClusterDensities> {
    cluster_densities_with(spec, &ClusterOptions::default())
}

pub fn cluster_densities_with(
    spec: &WoodsSaxonSpec,
    options: &ClusterOptions,
) -> Result<ClusterDensities> {
    let mut orbitals = solve_bound_states_with(spec, options)?;
    fill(&mut orbitals, spec.n_electrons)?;
    orbitals.retain(|o| o.occupancy > 0.0);

    let grid = options.radial_grid(spec)?;
    let k_grid = options.momentum_grid(spec)?;
    let n = spec.n_electrons as f64;

    let mut rho = vec![0.0; grid.n_points()];
    for orb in &orbitals {
        for (i, (acc, u)) in rho.iter_mut().zip(orb.u.values()).enumerate().skip(1) {
            let r = grid.node(i);
            *acc += orb.occupancy * u * u / (4.0 * PI * r * r * n);
        }
    }
    // rho is even in r: extrapolate linearly in r^2
    rho[0] = ((4.0 * rho[1] - rho[2]) / 3.0).max(0.0);

    let amplitudes: Vec<RadialFunction> = orbitals
        .par_iter()
        .map(|orb| radial_fourier(&orb.u, orb.l as i32, &k_grid))
        .collect::<Result<_>>()?;
    let mut n_k = vec![0.0; k_grid.n_points()];
    for (orb, phi) in orbitals.iter().zip(&amplitudes) {
        for (acc, p) in n_k.iter_mut().zip(phi.values()) {
            *acc += orb.occupancy * p * p / (4.0 * PI * n);
        }
    }

    Ok(ClusterDensities {
        rho: RadialFunction::new(grid, rho)?,
        n_k: RadialFunction::new(k_grid, n_k)?,
        orbitals,
    })
}

pub fn cluster_entropy(spec: &WoodsSaxonSpec) -> Result<EntropyResult> {
    cluster_entropy_with(spec, &ClusterOptions::default())
}

pub fn cluster_entropy_with(
    spec: &WoodsSaxonSpec,
    options: &ClusterOptions,
) -> Result<EntropyResult> {
    let d = cluster_densities_with(spec, options)?;
    Ok(entropy_sum(
        entropy_position(&d.rho)?,
        entropy_momentum(&d.n_k)?,
        spec.n_electrons,
    ))
}

/// Electron numbers at which a spherical shell closes in the default well.
pub const SHELL_CLOSURES: [usize; 6] = [2, 8, 20, 40, 58, 92];

/// Entropies for each electron number, sorted by `N`, evaluated in parallel.
pub fn cluster_entropy_scan(
    n_list: &[usize],
    base: &WoodsSaxonSpec,
    options: &ClusterOptions,
) -> Result<Vec<EntropyResult>> {
    if n_list.is_empty() {
        return Err(Error::invalid("empty particle-number list"));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            cluster_entropy_with(&base.with_electrons(n), options).map_err(|e| Error::at(n, e))
        })
        .collect()
}
