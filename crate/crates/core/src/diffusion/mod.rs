//! Fundamental solution of the time-fractional diffusion equation
//! `D_t^α N = D ΔN`, `N(x, 0) = δ(x)`, and the one-sided stable density.

mod levy;
mod series;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use levy::{levy_density, StableParams};
pub use series::{
    residue_series, series_n1, series_n1_summed, series_n3, series_n3_summed, Summed, SERIES_RADIUS,
};

use crate::specfun::gamma;
use crate::talbot;
use crate::{Error, Result};

/// Series results losing more than this factor to cancellation are
/// replaced by contour inversion.
const SERIES_CANCELLATION: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionProblem {
    pub alpha: f64,
    pub diff_coeff: f64,
    pub dim: u8,
}

impl DiffusionProblem {
    pub fn new(alpha: f64, diff_coeff: f64, dim: u8) -> Result<Self> {
        let p = DiffusionProblem {
            alpha,
            diff_coeff,
            dim,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::domain(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.diff_coeff > 0.0 && self.diff_coeff.is_finite()) {
            return Err(Error::domain(format!(
                "diff_coeff must be > 0, got {}",
                self.diff_coeff
            )));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(Error::domain(format!(
                "dim must be 1, 2 or 3, got {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// `A = x² / (D t^α)`.
    pub fn similarity_variable(&self, x: f64, t: f64) -> f64 {
        x * x / (self.diff_coeff * t.powf(self.alpha))
    }
}

/// `N(x, t)` at radial distance `x >= 0`.
///
/// Uses the residue series while it is accurate and inverts the Laplace
/// transform in `t` otherwise (far tails, strong cancellation).
pub fn fundamental_solution(p: &DiffusionProblem, x: f64, t: f64) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be >= 0, got {x}")));
    }
    let d = p.diff_coeff;
    let scale = d * t.powf(p.alpha);
    match p.dim {
        2 => Err(Error::NotSupported(
            "dim = 2 has no residue series; use asymptotic_n2".into(),
        )),
        1 if x == 0.0 => Ok(series_n1(p.alpha, 0.0)? / (2.0 * scale.sqrt())),
        3 if x == 0.0 => Err(Error::domain(
            "the three-dimensional solution is singular at x = 0",
        )),
        dim => {
            let a = x * x / scale;
            if a <= SERIES_RADIUS {
                let s = residue_series(p.alpha, dim, a / 4.0)?;
                if s.cancellation() <= SERIES_CANCELLATION {
                    return Ok(s.value / (PI.powf(f64::from(dim) / 2.0) * x.powi(i32::from(dim))));
                }
            }
            by_inversion(p, x, t)
        }
    }
}

/// Contour resolutions used for the tail inversion and its self-check.
const CONTOUR_FINE: usize = 48;
const CONTOUR_COARSE: usize = 32;

/// Laplace transform in `t` of the odd-dimensional solution, inverted on
/// the Talbot contour.
///
/// Far tails are many orders below the peak, where contour inversion only
/// has absolute accuracy; the self-check is therefore against the peak
/// scale `1/(D t^α)^{n/2}` and the result is clamped at zero.
fn by_inversion(p: &DiffusionProblem, x: f64, t: f64) -> Result<f64> {
    let alpha = p.alpha;
    let sd = p.diff_coeff.sqrt();
    let y = x / sd;
    let pre = match p.dim {
        1 => 1.0 / (2.0 * sd),
        3 => 1.0 / (4.0 * PI * p.diff_coeff * x),
        _ => unreachable!("only odd dimensions reach the inversion path"),
    };
    let power = if p.dim == 1 { 1.0 } else { 2.0 };
    let transform = |s: Complex64| {
        let r = s.powf(alpha / 2.0);
        r.powf(power) / s * (-y * r).exp() * pre
    };
    let fine = talbot::invert(transform, t, CONTOUR_FINE);
    let coarse = talbot::invert(transform, t, CONTOUR_COARSE);
    let peak = (p.diff_coeff * t.powf(alpha)).powf(-f64::from(p.dim) / 2.0);
    if !fine.is_finite() || (fine - coarse).abs() > 1e-11 * peak.max(fine.abs()) {
        return Err(Error::NonConvergence {
            what: "diffusion tail inversion",
            terms: CONTOUR_FINE,
        });
    }
    Ok(fine.max(0.0))
}

/// Small-`x` behaviour of the two-dimensional solution,
/// `ln(t^{α/2} / x) / (π Γ(1-α) t^α)`.
pub fn asymptotic_n2(alpha: f64, x: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(t > 0.0 && x > 0.0) {
        return Err(Error::domain("x and t must be > 0"));
    }
    let edge = t.powf(alpha / 2.0);
    if x > edge {
        return Err(Error::domain(format!(
            "x = {x} is outside the small-x regime x <= t^(α/2) = {edge}"
        )));
    }
    Ok((edge / x).ln() / (PI * gamma(1.0 - alpha) * t.powf(alpha)))
}
