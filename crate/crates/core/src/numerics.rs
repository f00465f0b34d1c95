//! Uniform radial meshes, composite quadrature, spherical Bessel functions and
//! the radial Fourier (spherical Hankel) transform shared by every pipeline.
//!
//! All radial integrals run over `[0, r_max]` on a uniform mesh so that the
//! Numerov solver, the imaginary-time propagator and the quadrature share the
//! same nodes.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Smallest mesh accepted by [`RadialGrid::new`].
pub const MIN_POINTS: usize = 64;

/// Uniform mesh `r_i = i * spacing`, `i = 0..n_points`, starting at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n_points: usize,
    spacing: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::invalid(format!(
                "grid extent must be positive, got {r_max}"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::invalid(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        Ok(Self {
            r_max,
            n_points,
            spacing: r_max / (n_points - 1) as f64,
        })
    }

    /// Mesh with the given extent whose spacing does not exceed `max_spacing`.
    pub fn with_max_spacing(r_max: f64, max_spacing: f64) -> Result<Self> {
        if !(max_spacing.is_finite() && max_spacing > 0.0) {
            return Err(Error::invalid(format!(
                "spacing must be positive, got {max_spacing}"
            )));
        }
        let intervals = (r_max / max_spacing).ceil() as usize;
        Self::new(r_max, (intervals + 1).max(MIN_POINTS))
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.r_max
        } else {
            i as f64 * self.spacing
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }

    /// Same extent, twice the number of intervals.
    pub fn refined(&self) -> Self {
        Self {
            r_max: self.r_max,
            n_points: 2 * self.n_points - 1,
            spacing: self.spacing / 2.0,
        }
    }

    /// Composite-rule weights `w_i` with `sum_i w_i f(r_i) ~ int_0^r_max f(r) dr`.
    ///
    /// Simpson's 1/3 rule over an even number of intervals; with an odd number
    /// the last three intervals use the 3/8 rule.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.n_points;
        let h = self.spacing;
        let mut w = vec![0.0; n];
        let intervals = n - 1;
        let simpson_end = if intervals.is_multiple_of(2) { n - 1 } else { n - 4 };
        for (i, wi) in w.iter_mut().enumerate().take(simpson_end + 1) {
            *wi = if i == 0 || i == simpson_end {
                h / 3.0
            } else if i % 2 == 1 {
                4.0 * h / 3.0
            } else {
                2.0 * h / 3.0
            };
        }
        if simpson_end < n - 1 {
            let c = 3.0 * h / 8.0;
            w[simpson_end] += c;
            w[simpson_end + 1] += 3.0 * c;
            w[simpson_end + 2] += 3.0 * c;
            w[simpson_end + 3] += c;
        }
        w
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<RadialFunction> {
        RadialFunction::new(*self, self.nodes().map(f).collect())
    }
}

/// Real samples of a radial function, one per node of its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::invalid(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!("sample {i} is not finite ({v})")));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    /// `int_0^r_max f(r) dr` without the spherical measure.
    pub fn integrate_linear(&self) -> f64 {
        dot(&self.grid.weights(), &self.values)
    }

    /// `int_0^r_max f(r)^2 dr`.
    pub fn norm_squared(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v * v)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `int_0^r_max f(r) 4 pi r^2 dr`.
pub fn integrate_radial(f: &RadialFunction) -> Result<f64> {
    if let Some((i, v)) = f.values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::invalid(format!("sample {i} is not finite ({v})")));
    }
    let grid = f.grid();
    Ok(grid
        .weights()
        .iter()
        .zip(f.values())
        .enumerate()
        .map(|(i, (w, v))| {
            let r = grid.node(i);
            w * v * 4.0 * PI * r * r
        })
        .sum())
}

/// Spherical Bessel function of the first kind, `j_l(x)`.
pub fn spherical_bessel_j(l: i32, x: f64) -> Result<f64> {
    if l < 0 {
        return Err(Error::invalid(format!(
            "Bessel order must be non-negative, got {l}"
        )));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::invalid(format!(
            "Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(sph_bessel(l as usize, x))
}

/// Unchecked `j_l(x)` for `x >= 0`.
///
/// Power series below `x = l/2 + 1`, upward recurrence for `x >= l`, Miller's
/// downward recurrence in between.
pub(crate) fn sph_bessel(l: usize, x: f64) -> f64 {
    let lf = l as f64;
    if x < 0.5 * lf + 1.0 {
        return bessel_series(l, x);
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let j1 = s / (x * x) - c / x;
    if l == 1 {
        return j1;
    }
    if x >= lf {
        let (mut prev, mut cur) = (j0, j1);
        for n in 1..l {
            let next = (2 * n + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        bessel_miller(l, x, j0, j1)
    }
}

fn bessel_series(l: usize, x: f64) -> f64 {
    // x^l / (2l+1)!!
    let mut lead = 1.0;
    for n in 1..=l {
        lead *= x / (2 * n + 1) as f64;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn bessel_miller(l: usize, x: f64, j0: f64, j1: f64) -> f64 {
    let start = l + 20 + (x.sqrt() * 4.0) as usize;
    let (mut next, mut cur) = (0.0_f64, 1e-30_f64);
    let mut at_l = 0.0;
    let mut at_1 = 0.0;
    for n in (1..=start).rev() {
        let prev = (2 * n + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds the unnormalized j_{n-1}
        if n - 1 == l {
            at_l = cur;
        }
        if n - 1 == 1 {
            at_1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            at_l *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    if j0.abs() >= j1.abs() {
        at_l * j0 / cur
    } else {
        at_l * j1 / at_1
    }
}

/// Radial momentum amplitude of a reduced radial function.
///
/// For `u(r) = r R(r)` with `int u^2 dr = 1` returns
/// `phi(k) = sqrt(2/pi) int_0^r_max j_l(k r) u(r) r dr` on `k_grid`, which
/// satisfies `int phi^2 k^2 dk = 1` when both meshes resolve the function.
pub fn radial_fourier(u: &RadialFunction, l: i32, k_grid: &RadialGrid) -> Result<RadialFunction> {
    if l < 0 {
        return Err(Error::invalid(format!(
            "angular momentum must be >= 0, got {l}"
        )));
    }
    let norm = u.norm_squared();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::invalid(format!(
            "reduced amplitude must satisfy int u^2 dr = 1, got {norm}"
        )));
    }
    let r_grid = *u.grid();
    let w = r_grid.weights();
    let src: Vec<(f64, f64)> = (0..r_grid.n_points())
        .map(|i| {
            let r = r_grid.node(i);
            (r, w[i] * u.values()[i] * r)
        })
        .filter(|&(_, a)| a != 0.0)
        .collect();
    RadialFunction::new(*k_grid, hankel(&src, l as usize, k_grid))
}

/// Inverse of [`radial_fourier`]: `u(r) = r sqrt(2/pi) int j_l(k r) phi(k) k^2 dk`.
pub fn inverse_radial_fourier(
    phi: &RadialFunction,
    l: i32,
    r_grid: &RadialGrid,
) -> Result<RadialFunction> {
    if l < 0 {
        return Err(Error::invalid(format!(
            "angular momentum must be >= 0, got {l}"
        )));
    }
    let k_grid = *phi.grid();
    let w = k_grid.weights();
    let norm: f64 = (0..k_grid.n_points())
        .map(|i| {
            let k = k_grid.node(i);
            w[i] * phi.values()[i].powi(2) * k * k
        })
        .sum();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::invalid(format!(
            "momentum amplitude must satisfy int phi^2 k^2 dk = 1, got {norm}"
        )));
    }
    let src: Vec<(f64, f64)> = (0..k_grid.n_points())
        .map(|i| {
            let k = k_grid.node(i);
            (k, w[i] * phi.values()[i] * k * k)
        })
        .filter(|&(_, a)| a != 0.0)
        .collect();
    let mut values = hankel(&src, l as usize, r_grid);
    for (i, v) in values.iter_mut().enumerate() {
        *v *= r_grid.node(i);
    }
    RadialFunction::new(*r_grid, values)
}

// sqrt(2/pi) sum_i a_i j_l(q_i t) at every node t of `target`.
fn hankel(src: &[(f64, f64)], l: usize, target: &RadialGrid) -> Vec<f64> {
    let pref = (2.0 / PI).sqrt();
    (0..target.n_points())
        .into_par_iter()
        .map(|j| {
            let t = target.node(j);
            pref * src
                .iter()
                .map(|&(q, a)| a * sph_bessel(l, q * t))
                .sum::<f64>()
        })
        .collect()
}

/// Symmetric difference quotient `(f(x+h) - f(x-h)) / 2h`.
pub fn central_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> Result<f64> {
    try_central_derivative(|t| Ok(f(t)), x, h)
}

/// [`central_derivative`] for a fallible function; the first error is returned.
pub fn try_central_derivative(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid(format!(
            "difference step must be positive, got {h}"
        )));
    }
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    // j_l(x) = x^l / (2^{l+1} l!) int_0^pi cos(x cos t) sin^{2l+1} t dt
    fn bessel_oracle(l: usize, x: f64) -> f64 {
        let n = 20_000;
        let h = PI / n as f64;
        let f = |t: f64| (x * t.cos()).cos() * t.sin().powi(2 * l as i32 + 1);
        let mut s = f(0.0) + f(PI);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let integral = s * h / 3.0;
        let fact: f64 = (1..=l).map(|k| k as f64).product();
        x.powi(l as i32) / (2f64.powi(l as i32 + 1) * fact) * integral
    }

    #[test]
    fn uniform_sphere_normalizes() {
        for &r_max in &[0.5, 1.0, 2.0, 10.0] {
            let grid = RadialGrid::new(r_max, 200).unwrap();
            let rho0 = 3.0 / (4.0 * PI * r_max.powi(3));
            let f = grid.sample(|_| rho0).unwrap();
            assert!((integrate_radial(&f).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_function_integrates_to_zero() {
        let grid = RadialGrid::new(3.0, 101).unwrap();
        assert_eq!(
            integrate_radial(&grid.sample(|_| 0.0).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn gaussian_normalizes() {
        let grid = RadialGrid::new(12.0, 2048).unwrap();
        let f = grid
            .sample(|r| (2.0 * PI).powf(-1.5) * (-r * r / 2.0).exp())
            .unwrap();
        assert!((integrate_radial(&f).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn odd_and_even_interval_counts_are_exact_for_cubics() {
        for n in [64, 65, 100, 101] {
            let grid = RadialGrid::new(2.0, n).unwrap();
            let f = grid.sample(|r| r * r * r - r + 1.0).unwrap();
            let exact = 4.0 - 2.0 + 2.0;
            assert!((f.integrate_linear() - exact).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn non_finite_sample_is_rejected() {
        let grid = RadialGrid::new(1.0, 64).unwrap();
        let mut values = vec![0.0; 64];
        values[3] = f64::NAN;
        assert!(RadialFunction::new(grid, values).is_err());
    }

    #[test]
    fn grid_invariants() {
        assert!(RadialGrid::new(1.0, 63).is_err());
        assert!(RadialGrid::new(0.0, 100).is_err());
        let g = RadialGrid::new(5.0, 64).unwrap();
        assert!((g.spacing() - 5.0 / 63.0).abs() < 1e-15);
        let nodes: Vec<f64> = g.nodes().collect();
        assert!(nodes.windows(2).all(|p| p[1] > p[0]));
        assert_eq!(nodes[63], 5.0);
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(spherical_bessel_j(0, 0.0).unwrap(), 1.0);
        assert!(spherical_bessel_j(0, PI).unwrap().abs() < 1e-12);
        let oracle = bessel_oracle(1, 2.0);
        assert!((oracle - 0.435397).abs() < 1e-6);
        assert!((spherical_bessel_j(1, 2.0).unwrap() - oracle).abs() < 1e-12);
        assert!(spherical_bessel_j(-1, 1.0).is_err());
    }

    #[test]
    fn bessel_matches_quadrature_oracle_in_every_branch() {
        for l in 0..=12usize {
            for &x in &[0.0, 0.05, 0.3, 1.0, 2.5, 4.0, 6.5, 9.0, 13.0] {
                let got = sph_bessel(l, x);
                let want = if x == 0.0 {
                    if l == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    bessel_oracle(l, x)
                };
                assert!(
                    (got - want).abs() < 1e-11 * want.abs() + 1e-12,
                    "l={l} x={x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn bessel_large_argument_reference_values() {
        // scipy.special.spherical_jn
        let cases = [
            (5, 30.0, -0.020504008736827492),
            (8, 30.0, -0.00704391055489253),
            (12, 30.0, 0.03284742792427147),
        ];
        for (l, x, want) in cases {
            assert!((sph_bessel(l, x) - want).abs() < 1e-14, "l={l}");
        }
    }

    #[test]
    fn derivative_examples() {
        assert!((central_derivative(|x| x * x, 3.0, 1e-4).unwrap() - 6.0).abs() < 1e-7);
        assert!((central_derivative(f64::ln, 2.0, 1e-5).unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(central_derivative(|_| 7.0, 1.0, 0.1).unwrap(), 0.0);
        assert!(central_derivative(|x| x, 1.0, 0.0).is_err());
        assert!(central_derivative(|x| x, 1.0, -1.0).is_err());
    }

    fn gaussian_u(grid: &RadialGrid) -> RadialFunction {
        grid.sample(|r| 2.0 * PI.powf(-0.25) * r * (-r * r / 2.0).exp())
            .unwrap()
    }

    #[test]
    fn gaussian_transforms_to_gaussian() {
        let r_grid = RadialGrid::new(12.0, 1201).unwrap();
        let k_grid = RadialGrid::new(12.0, 601).unwrap();
        let phi = radial_fourier(&gaussian_u(&r_grid), 0, &k_grid).unwrap();
        for (i, v) in phi.values().iter().enumerate() {
            let k = k_grid.node(i);
            let want = 2.0 * PI.powf(-0.25) * (-k * k / 2.0).exp();
            assert!((v - want).abs() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn hydrogen_1s_momentum_amplitude() {
        let r_grid = RadialGrid::new(60.0, 6001).unwrap();
        let k_grid = RadialGrid::new(20.0, 401).unwrap();
        let u = r_grid.sample(|r| 2.0 * r * (-r).exp()).unwrap();
        let phi = radial_fourier(&u, 0, &k_grid).unwrap();
        let pref = 4.0 * (2.0 / PI).sqrt();
        for (i, v) in phi.values().iter().enumerate() {
            let k = k_grid.node(i);
            let want = pref / (1.0 + k * k).powi(2);
            assert!((v - want).abs() < 1e-4, "k={k}: {v} vs {want}");
        }
    }

    #[test]
    fn unnormalized_amplitude_is_rejected() {
        let r_grid = RadialGrid::new(12.0, 1201).unwrap();
        let u = gaussian_u(&r_grid).scaled(1.01).unwrap();
        let k_grid = RadialGrid::new(8.0, 201).unwrap();
        assert!(matches!(
            radial_fourier(&u, 0, &k_grid),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn transform_round_trip_on_gaussian() {
        let r_grid = RadialGrid::new(12.0, 1201).unwrap();
        let k_grid = RadialGrid::new(12.0, 1201).unwrap();
        for l in [0, 1, 2] {
            // r^{l+1} e^{-r^2/2}, normalized
            let raw = r_grid
                .sample(|r| r.powi(l + 1) * (-r * r / 2.0).exp())
                .unwrap();
            let u = raw.scaled(1.0 / raw.norm_squared().sqrt()).unwrap();
            let phi = radial_fourier(&u, l, &k_grid).unwrap();
            let back = inverse_radial_fourier(&phi, l, &r_grid).unwrap();
            for (a, b) in u.values().iter().zip(back.values()) {
                assert!((a - b).abs() < 1e-5);
            }
        }
    }
}
