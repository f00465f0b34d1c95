//! Fits of `S = a + b ln N` and `R = r0 N^alpha`, and the entropic force
//! `F = -lambda dS/dA` on the sphere of area `A = 4 pi r^2` that contains the
//! system.
//!
//! With the logarithmic law and `R = r0 N^alpha` the force is exactly
//! `-b lambda / (8 pi alpha r^2)`; [`numerical_entropic_force`] evaluates the
//! same derivative by finite differences for any entropy model.

use std::f64::consts::PI;

use crate::analytic::{cell_entropy, CellGasSpec, CellStatistics};
use crate::error::{Error, Result};
use crate::numerics::try_central_derivative;

/// Least-squares fit of `S = a + b ln N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFit {
    pub intercept_a: f64,
    pub slope_b: f64,
    pub r_squared: f64,
    /// `S_i - (a + b ln N_i)`, in input order.
    pub residuals: Vec<f64>,
}

impl LogFit {
    pub fn entropy(&self, n: f64) -> f64 {
        self.intercept_a + self.slope_b * n.ln()
    }
}

/// Least-squares fit of `R = r0 N^alpha`, `alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub prefactor_r0: f64,
    pub exponent_alpha: f64,
}

impl PowerFit {
    pub fn new(prefactor_r0: f64, exponent_alpha: f64) -> Result<Self> {
        if !(prefactor_r0.is_finite() && prefactor_r0 > 0.0) {
            return Err(Error::invalid(format!(
                "r0 must be positive, got {prefactor_r0}"
            )));
        }
        if !(exponent_alpha.is_finite() && exponent_alpha > 0.0) {
            return Err(Error::NonPositiveExponent {
                exponent: exponent_alpha,
            });
        }
        Ok(Self {
            prefactor_r0,
            exponent_alpha,
        })
    }

    /// `R = r0 N^{1/3}`, the constant-density law.
    pub fn constant_density(r0: f64) -> Result<Self> {
        Self::new(r0, 1.0 / 3.0)
    }

    pub fn radius(&self, n: f64) -> f64 {
        self.prefactor_r0 * n.powf(self.exponent_alpha)
    }

    /// Inverse law, `N = (R / r0)^{1/alpha}`.
    pub fn count(&self, radius: f64) -> f64 {
        (radius / self.prefactor_r0).powf(1.0 / self.exponent_alpha)
    }
}

// slope, intercept and residuals of y on x
fn ols(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("need at least two distinct N".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

fn check_points(points: &[(f64, f64)], what: &str) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{} point(s); need at least two",
            points.len()
        )));
    }
    for &(n, v) in points {
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid(format!(
                "particle number must be positive, got {n}"
            )));
        }
        if !v.is_finite() {
            return Err(Error::invalid(format!("{what} must be finite, got {v}")));
        }
    }
    Ok(())
}

/// Ordinary least squares of `S` on `ln N` over `(N, S)` pairs.
pub fn fit_log(points: &[(f64, f64)]) -> Result<LogFit> {
    check_points(points, "entropy")?;
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (slope, intercept) = ols(&x, &y)?;
    let residuals: Vec<f64> = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| yi - (intercept + slope * xi))
        .collect();
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(LogFit {
        intercept_a: intercept,
        slope_b: slope,
        r_squared,
        residuals,
    })
}

/// Least squares of `ln R` on `ln N` over `(N, R)` pairs.
///
/// A fitted exponent that is not positive is reported as
/// [`Error::NonPositiveExponent`]: the force derivation needs `alpha > 0`.
pub fn fit_power(points: &[(f64, f64)]) -> Result<PowerFit> {
    check_points(points, "radius")?;
    if let Some(&(_, r)) = points.iter().find(|p| p.1 <= 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept) = ols(&x, &y)?;
    if slope <= 1e-12 {
        return Err(Error::NonPositiveExponent { exponent: slope });
    }
    PowerFit::new(intercept.exp(), slope)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

/// Particle number enclosed by area `A` under `R = r0 N^{1/3}`:
/// `A^{3/2} / (4 pi r0^2)^{3/2}`.
pub fn n_of_area(area: f64, r0: f64) -> Result<f64> {
    let area = positive("area", area)?;
    let r0 = positive("r0", r0)?;
    Ok((area / (4.0 * PI * r0 * r0)).powf(1.5))
}

/// `F = -3 b lambda / (8 pi r^2)` for `S = a + b ln N` and `R ~ N^{1/3}`.
pub fn entropic_force_log(slope_b: f64, lambda: f64, r: f64) -> Result<f64> {
    let r = positive("radius", r)?;
    Ok(-3.0 * slope_b * lambda / (8.0 * PI * r * r))
}

/// `F = -b lambda / (8 pi alpha r^2)` for `R ~ N^alpha`.
pub fn entropic_force_general(
    slope_b: f64,
    exponent_alpha: f64,
    lambda: f64,
    r: f64,
) -> Result<f64> {
    if !(exponent_alpha.is_finite() && exponent_alpha > 0.0) {
        return Err(Error::invalid(format!(
            "radius exponent must be positive, got {exponent_alpha}"
        )));
    }
    let r = positive("radius", r)?;
    // written so that alpha = 1/3 reproduces entropic_force_log bit for bit
    Ok(-3.0 * slope_b * lambda / (8.0 * PI * (3.0 * exponent_alpha) * r * r))
}

/// `lambda = 8 pi G M m / (3 b)`, which turns the logarithmic-law force into
/// `-G M m / r^2`.
pub fn calibrate_gravity(g: f64, big_m: f64, m: f64, slope_b: f64) -> Result<f64> {
    if !(slope_b > 0.0) {
        return Err(Error::Sign { slope: slope_b });
    }
    let g = positive("G", g)?;
    let big_m = positive("M", big_m)?;
    let m = positive("m", m)?;
    Ok(8.0 * PI * g * big_m * m / (3.0 * slope_b))
}

/// `F = -nu / r^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceLaw {
    pub coefficient_nu: f64,
    pub lambda_value: f64,
    pub model_tag: String,
}

impl ForceLaw {
    pub fn from_log_law(
        slope_b: f64,
        exponent_alpha: f64,
        lambda: f64,
        tag: impl Into<String>,
    ) -> Result<Self> {
        let lambda = positive("lambda", lambda)?;
        let nu = -entropic_force_general(slope_b, exponent_alpha, lambda, 1.0)?;
        Ok(Self {
            coefficient_nu: nu,
            lambda_value: lambda,
            model_tag: tag.into(),
        })
    }

    pub fn is_attractive(&self) -> bool {
        self.coefficient_nu > 0.0
    }

    pub fn force(&self, r: f64) -> Result<f64> {
        let r = positive("radius", r)?;
        Ok(-self.coefficient_nu / (r * r))
    }
}

/// Relative area step used when none is given.
pub const DEFAULT_AREA_STEP: f64 = 1e-5;

/// `-lambda dS/dA` by a central difference in the area, with `S` evaluated
/// through `A -> R = sqrt(A / 4 pi) -> N = radius_law.count(R) -> S(N)`.
///
/// `relative_step` is the difference step as a fraction of `A`.
pub fn numerical_entropic_force(
    entropy_model: impl Fn(f64) -> Result<f64>,
    radius_law: &PowerFit,
    lambda: f64,
    r: f64,
    relative_step: f64,
) -> Result<f64> {
    let r = positive("radius", r)?;
    let relative_step = positive("relative step", relative_step)?;
    let area = 4.0 * PI * r * r;
    let s_of_area = |a: f64| entropy_model(radius_law.count((a / (4.0 * PI)).sqrt()));
    let ds_da = try_central_derivative(s_of_area, area, relative_step * area)?;
    Ok(-lambda * ds_da)
}

/// Richardson-extrapolated [`numerical_entropic_force`]: `(4 F(h/2) - F(h)) / 3`.
pub fn numerical_entropic_force_richardson(
    entropy_model: impl Fn(f64) -> Result<f64>,
    radius_law: &PowerFit,
    lambda: f64,
    r: f64,
    relative_step: f64,
) -> Result<f64> {
    let coarse = numerical_entropic_force(&entropy_model, radius_law, lambda, r, relative_step)?;
    let fine =
        numerical_entropic_force(&entropy_model, radius_law, lambda, r, 0.5 * relative_step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Entropic force of an ideal cell gas of `n_particles` particles filling a
/// sphere of radius `r`, where the number of cells grows with the volume and
/// the occupancy at `r` is `occupancy`.
///
/// In the low-occupancy limit this tends to `-lambda 3 N k_B / (8 pi r^2)`.
pub fn cell_gas_force(
    stats: CellStatistics,
    occupancy: f64,
    n_particles: f64,
    k_b: f64,
    lambda: f64,
    r: f64,
    relative_step: f64,
) -> Result<f64> {
    let r = positive("radius", r)?;
    let occupancy = positive("occupancy", occupancy)?;
    let n_particles = positive("particle number", n_particles)?;
    // cells n = N / x at radius r, n ~ V ~ R^3
    let cells = n_particles / occupancy;
    let law = PowerFit::constant_density(r / cells.cbrt())?;
    let model = |cells: f64| {
        cell_entropy(
            stats,
            &CellGasSpec::new(n_particles / cells, n_particles).with_kb(k_b),
        )
    };
    numerical_entropic_force(model, &law, lambda, r, relative_step)
}

/// `-lambda 3 N k_B / (8 pi r^2)`.
pub fn classical_limit_force(n_particles: f64, k_b: f64, lambda: f64, r: f64) -> Result<f64> {
    let r = positive("radius", r)?;
    Ok(-lambda * 3.0 * n_particles * k_b / (8.0 * PI * r * r))
}
