//! Mittag-Leffler functions of one, two and three (Prabhakar) parameters on
//! the real line.
//!
//! ```text
//! E^δ_{β,γ}(z) = Σ_{τ≥0} (δ)_τ z^τ / (Γ(βτ + γ) τ!)
//! E_{β,γ}(z)   = E^1_{β,γ}(z)
//! E_β(z)       = E^1_{β,1}(z)
//! ```
//!
//! Evaluation is by compensated power-series summation. On the negative
//! axis the alternating series cancels catastrophically once `|z|^{1/β}`
//! grows; when the ratio `Σ|term| / |Σ term|` exceeds [`MAX_CANCELLATION`]
//! the value is instead recovered from the Laplace pair
//!
//! ```text
//! L{ t^{γ-1} E^δ_{β,γ}(-t^β) }(s) = s^{βδ-γ} / (s^β + 1)^δ
//! ```
//!
//! inverted on a Talbot contour at `t = |z|^{1/β}`. That route is only taken
//! where the transform is single-valued inside the contour (`β ≤ 1`, or
//! integer `δ`).

use num_complex::Complex64;

use super::gamma::gamma_recip;
use crate::{talbot, Error, Result};

/// Arguments beyond this magnitude are outside the supported regime.
pub const MAX_ARGUMENT: f64 = 50.0;

/// Largest tolerated `Σ|term| / |Σ term|` before the series result is
/// considered unreliable on the negative axis.
pub const MAX_CANCELLATION: f64 = 1e3;

/// Parameters of the three-parameter Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub z: f64,
}

impl MlParams {
    pub fn new(beta: f64, gamma: f64, delta: f64, z: f64) -> Result<Self> {
        let p = MlParams {
            beta,
            gamma,
            delta,
            z,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::domain(format!(
                "beta must be > 0, got {}",
                self.beta
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if !self.delta.is_finite() || !self.z.is_finite() {
            return Err(Error::domain("delta and z must be finite"));
        }
        Ok(())
    }
}

/// Stopping controls for the power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControls {
    pub max_terms: usize,
    /// Terms below `abs_tol * |partial sum|` count as negligible.
    pub abs_tol: f64,
    /// Number of successive negligible terms needed to stop.
    pub consecutive_small: usize,
}

impl Default for SeriesControls {
    fn default() -> Self {
        SeriesControls {
            max_terms: 500,
            abs_tol: 1e-15,
            consecutive_small: 3,
        }
    }
}

/// Rising factorial `(δ)_τ = δ (δ+1) ... (δ+τ-1)`.
pub fn pochhammer(delta: f64, tau: u32) -> f64 {
    (0..tau).fold(1.0, |acc, k| acc * (delta + f64::from(k)))
}

/// Result of a plain series summation, with the data needed to judge it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// `Σ |term|`, the scale against which round-off accumulates.
    pub abs_sum: f64,
    pub terms: usize,
}

impl SeriesSum {
    /// Ratio of the absolute series to the signed sum.
    pub fn cancellation(&self) -> f64 {
        if self.value == 0.0 {
            if self.abs_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_sum / self.value.abs()
        }
    }
}

/// Sums the Prabhakar series directly, without any fallback.
pub fn prabhakar_series(p: &MlParams, c: &SeriesControls) -> Result<SeriesSum> {
    p.validate()?;
    if c.max_terms == 0 || !(c.abs_tol > 0.0) {
        return Err(Error::domain(
            "series controls need max_terms >= 1 and abs_tol > 0",
        ));
    }
    let mut coef = 1.0; // (δ)_τ z^τ / τ!
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    let mut small = 0usize;
    let mut prev = f64::INFINITY;
    for tau in 0..c.max_terms {
        let k = tau as f64;
        let term = coef * gamma_recip(p.beta * k + p.gamma);
        if !term.is_finite() {
            break;
        }
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        abs_sum += term.abs();

        let magnitude = term.abs();
        if magnitude <= c.abs_tol * sum.abs() && magnitude <= prev {
            small += 1;
            if small >= c.consecutive_small {
                return Ok(SeriesSum {
                    value: sum,
                    abs_sum,
                    terms: tau + 1,
                });
            }
        } else {
            small = 0;
        }
        prev = magnitude;
        coef *= (p.delta + k) * p.z / (k + 1.0);
        if coef == 0.0 {
            // terminating series (δ a non-positive integer, or z = 0)
            return Ok(SeriesSum {
                value: sum,
                abs_sum,
                terms: tau + 1,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "Mittag-Leffler series",
        terms: c.max_terms,
    })
}

fn inversion_supported(p: &MlParams) -> bool {
    p.z < 0.0 && (p.beta <= 1.0 || p.delta.fract() == 0.0)
}

/// `E^δ_{β,γ}(z)` for `z < 0` from the Laplace pair, no series involved.
fn prabhakar_by_inversion(p: &MlParams) -> f64 {
    let t = (-p.z).powf(1.0 / p.beta);
    let (beta, delta, gamma) = (p.beta, p.delta, p.gamma);
    let transform = move |s: Complex64| {
        let sb = s.powf(beta);
        s.powf(beta * delta - gamma) / (sb + 1.0).powf(delta)
    };
    let scale = t.powf(1.0 - gamma);
    if beta <= 1.0 {
        // no poles on the principal sheet; larger contours only add round-off
        return scale * talbot::invert(transform, t, 28);
    }
    // poles at s^β = -1 sit on |s| = 1 and need a contour that grows with t;
    // take the adjacent pair of sizes that agree best
    let values: Vec<f64> = (8..=20)
        .map(|k| talbot::invert(transform, t, 4 * k))
        .collect();
    let best = values
        .windows(2)
        .min_by(|a, b| (a[0] - a[1]).abs().total_cmp(&(b[0] - b[1]).abs()))
        .map_or(values[0], |w| w[1]);
    scale * best
}

/// Three-parameter (Prabhakar) Mittag-Leffler function `E^δ_{β,γ}(z)`.
pub fn ml_prabhakar(p: &MlParams, c: &SeriesControls) -> Result<f64> {
    p.validate()?;
    if p.z == 0.0 {
        return Ok(gamma_recip(p.gamma));
    }
    if p.z.abs() > MAX_ARGUMENT {
        return Err(Error::NonConvergence {
            what: "Mittag-Leffler series (|z| beyond supported regime)",
            terms: 0,
        });
    }
    if p.beta == 1.0 && p.z < 0.0 {
        // Kummer: E^δ_{1,γ}(z) = e^z E^{γ-δ}_{1,γ}(-z)
        let k = MlParams {
            delta: p.gamma - p.delta,
            z: -p.z,
            ..*p
        };
        if let Ok(sum) = prabhakar_series(&k, c) {
            if sum.cancellation() <= MAX_CANCELLATION {
                return Ok(p.z.exp() * sum.value);
            }
        }
    }
    match prabhakar_series(p, c) {
        Ok(sum) if sum.cancellation() <= MAX_CANCELLATION || !inversion_supported(p) => {
            if p.z > 0.0 || sum.cancellation() * f64::EPSILON < 1e-4 {
                Ok(sum.value)
            } else {
                Err(Error::NonConvergence {
                    what: "Mittag-Leffler series (cancellation)",
                    terms: sum.terms,
                })
            }
        }
        Ok(_) => Ok(prabhakar_by_inversion(p)),
        Err(e) => {
            if inversion_supported(p) {
                Ok(prabhakar_by_inversion(p))
            } else {
                Err(e)
            }
        }
    }
}

/// Two-parameter Mittag-Leffler function `E_{α,β}(z)`, summed from index 0.
pub fn ml_two(alpha: f64, beta: f64, z: f64, c: &SeriesControls) -> Result<f64> {
    ml_prabhakar(&MlParams::new(alpha, beta, 1.0, z)?, c)
}

/// Classical Mittag-Leffler function `E_ν(z)`.
pub fn ml_one(nu: f64, z: f64, c: &SeriesControls) -> Result<f64> {
    ml_two(nu, 1.0, z, c)
}

/// Prabhakar function with fixed parameters, precomputed for repeated
/// evaluation at arguments `|z| <= z_max`.
///
/// Used as the modulating factor of convolution kernels where the same
/// function is evaluated at hundreds of quadrature nodes.
#[derive(Debug, Clone)]
pub struct Prabhakar {
    params: MlParams,
    coefs: Vec<f64>,
}

impl Prabhakar {
    pub fn new(beta: f64, gamma: f64, delta: f64, z_max: f64) -> Result<Self> {
        let params = MlParams::new(beta, gamma, delta, 0.0)?;
        let z_max = z_max.abs().min(MAX_ARGUMENT);
        let mut coefs = Vec::new();
        let mut c = 1.0;
        let mut peak: f64 = 0.0;
        let mut small = 0;
        for tau in 0..2000u32 {
            let k = f64::from(tau);
            let coef = c * gamma_recip(beta * k + gamma);
            coefs.push(coef);
            let size = coef.abs() * z_max.powf(k);
            peak = peak.max(size);
            if size <= 1e-17 * peak {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            c *= (delta + k) / (k + 1.0);
            if c == 0.0 {
                break;
            }
        }
        Ok(Prabhakar { params, coefs })
    }

    pub fn params(&self) -> MlParams {
        self.params
    }

    pub fn eval(&self, z: f64) -> f64 {
        let (value, abs_sum) = self
            .coefs
            .iter()
            .rev()
            .fold((0.0, 0.0), |(v, a), c| (v * z + c, a * z.abs() + c.abs()));
        if z >= 0.0 || abs_sum <= MAX_CANCELLATION * value.abs() {
            value
        } else {
            let p = MlParams { z, ..self.params };
            ml_prabhakar(&p, &SeriesControls::default()).unwrap_or(f64::NAN)
        }
    }
}
