use num_complex::Complex64;

use crate::fracops::SampledFunction;
use crate::kinetics::{ForcingSpec, KineticProblem};
use crate::quad::{gauss_kronrod, tanh_sinh};
use crate::specfun::gamma;
use crate::talbot::{invert, invert_with_scale};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotControls {
    pub contour_points: usize,
    pub precision_target: f64,
}

impl Default for TalbotControls {
    fn default() -> Self {
        TalbotControls {
            contour_points: 64,
            precision_target: 1e-9,
        }
    }
}

impl TalbotControls {
    pub fn validate(&self) -> Result<()> {
        if self.contour_points < 16 || !self.contour_points.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "contour_points must be even and >= 16, got {}",
                self.contour_points
            )));
        }
        if !(self.precision_target > 0.0) {
            return Err(Error::domain("precision_target must be > 0"));
        }
        Ok(())
    }
}

/// Inverse Laplace transform at `t > 0`, checked against a contour of half
/// the resolution.
///
/// The two resolutions must agree to `10 * precision_target` relative to the
/// result, or to the round-off floor of the contour sum near exact zeros.
pub fn invert_laplace<F>(transform: F, t: f64, c: &TalbotControls) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    c.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    let (fine, scale) = invert_with_scale(&transform, t, c.contour_points);
    let half = c.contour_points / 2;
    let coarse = invert(&transform, t, half + half % 2);
    if !fine.is_finite() {
        return Err(Error::OracleFailure(format!(
            "non-finite inversion at t = {t}"
        )));
    }
    let gap = (fine - coarse).abs();
    let floor = ROUNDOFF_MARGIN * f64::EPSILON * scale;
    if gap > 10.0 * c.precision_target * fine.abs() + floor {
        return Err(Error::OracleFailure(format!(
            "contour resolutions disagree at t = {t}: {fine} vs {coarse}"
        )));
    }
    Ok(fine)
}

const ROUNDOFF_MARGIN: f64 = 1e3;

/// `f̃(s)` for the forcing kinds.
pub fn forcing_transform(f: &ForcingSpec, s: Complex64) -> Complex64 {
    match f {
        ForcingSpec::Unit => 1.0 / s,
        ForcingSpec::PowerLaw { rho } => gamma(*rho) * s.powf(-rho),
        ForcingSpec::MlForcing {
            nu,
            gamma: g,
            delta,
            c,
        } => s.powf(nu * delta - g) / (s.powf(*nu) + c.powf(*nu)).powf(*delta),
        ForcingSpec::Sampled(sf) => sampled_transform(sf, s),
    }
}

/// `N0 f̃(s) / (1 + Σ a_j s^{-ν_j})`.
pub fn kinetic_transform(p: &KineticProblem, s: Complex64) -> Complex64 {
    kinetic_transform_signed(p, s, 1.0)
}

/// As [`kinetic_transform`] with the memory terms scaled by `sign`.
pub fn kinetic_transform_signed(p: &KineticProblem, s: Complex64, sign: f64) -> Complex64 {
    let denom = p.terms.iter().fold(Complex64::new(1.0, 0.0), |acc, tm| {
        acc + sign * tm.a * s.powf(-tm.nu)
    });
    p.n0 * forcing_transform(&p.forcing, s) / denom
}

/// `(1 - e^{-x}) / x` and `(1 - e^{-x} - x e^{-x}) / x²`.
fn phi(x: Complex64) -> (Complex64, Complex64) {
    if x.norm() < 0.25 {
        let mut p1 = Complex64::new(0.0, 0.0);
        let mut p2 = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 0..20 {
            let kk = f64::from(k);
            fact *= kk + 1.0;
            p1 += pow / fact;
            p2 += pow * (kk + 1.0) / (fact * (kk + 2.0));
            pow *= -x;
        }
        (p1, p2)
    } else {
        let e = (-x).exp();
        ((1.0 - e) / x, (1.0 - e - x * e) / (x * x))
    }
}

/// Exact transform of the piecewise-linear interpolant, held constant
/// beyond the last sample.
pub fn sampled_transform(f: &SampledFunction, s: Complex64) -> Complex64 {
    let g = f.grid();
    let v = f.values();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..g.len() - 1 {
        let h = g[i + 1] - g[i];
        let slope = (v[i + 1] - v[i]) / h;
        let (p1, p2) = phi(s * h);
        acc += (-s * g[i]).exp() * h * (v[i] * p1 + slope * h * p2);
    }
    let end = *g.last().unwrap_or(&0.0);
    acc + v[v.len() - 1] * (-s * end).exp() / s
}

/// `∫_0^∞ e^{-ut} f(t) dt` for the sampled interpolant.
pub fn forward_laplace_sampled(f: &SampledFunction, u: f64) -> Result<f64> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("u must be > 0, got {u}")));
    }
    Ok(sampled_transform(f, Complex64::new(u, 0.0)).re)
}

/// Pieces below this fraction of `1/u` go to the tanh-sinh rule.
const INNER: f64 = 1.0 / 1_073_741_824.0;
const TAIL_BOUND: f64 = 1e-14;

/// `∫_0^∞ e^{-ut} f(t) dt` by adaptive quadrature on geometrically growing
/// pieces, truncated once `e^{-uT} |f(T)| / u` drops below 1e-14.
pub fn forward_laplace<F: Fn(f64) -> f64>(f: F, u: f64) -> Result<f64> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("u must be > 0, got {u}")));
    }
    let g = |t: f64| {
        let v = f(t);
        if v == 0.0 {
            0.0
        } else {
            v * (-u * t).exp()
        }
    };
    let scale = 1.0 / u;
    let mut a = scale * INNER;
    let mut total = tanh_sinh(0.0, a, |lo, _| g(lo));
    if !total.is_finite() {
        return Err(Error::OracleFailure(
            "non-finite transform integrand near t = 0".into(),
        ));
    }
    let mut b = 2.0 * a;
    for _ in 0..120 {
        let tail = ((-u * b).exp() * f(b).abs()).max((-u * b).exp() * f(0.75 * b).abs()) / u;
        if !tail.is_finite() {
            break;
        }
        total += gauss_kronrod(&g, a, b, 1e-13, 1e-12)?;
        if !total.is_finite() {
            return Err(Error::OracleFailure(format!(
                "non-finite transform integrand below t = {b:e}"
            )));
        }
        if b > scale && tail < TAIL_BOUND {
            return Ok(total);
        }
        a = b;
        b *= 2.0;
    }
    Err(Error::TruncationWarning(format!(
        "integrand decay not verified up to t = {a:e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{ml_one, SeriesControls};

    #[test]
    fn forward_elementary() {
        assert!((forward_laplace(|_| 1.0, 2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((forward_laplace(|t| t, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let inv_sqrt = forward_laplace(|t| t.powf(-0.5), 1.0).unwrap();
        assert!((inv_sqrt - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!(matches!(
            forward_laplace(|t| (2.0 * t).exp(), 1.0),
            Err(Error::TruncationWarning(_))
        ));
    }

    #[test]
    fn inversion_pairs() {
        let c = TalbotControls::default();
        assert!((invert_laplace(|s| 1.0 / s, 1.0, &c).unwrap() - 1.0).abs() < 1e-10);
        let e = invert_laplace(|s| 1.0 / (s + 1.0), 2.0, &c).unwrap();
        assert!((e - 0.135_335_283_236_612_7).abs() < 1e-10);
        let ml = invert_laplace(|s| 1.0 / (s * (1.0 + s.powf(-0.5))), 1.0, &c).unwrap();
        assert!((ml - 0.427_583_576_155_807).abs() < 1e-10, "{ml}");
        let want = ml_one(0.5, -1.0, &SeriesControls::default()).unwrap();
        assert!((ml - want).abs() < 1e-10);
    }

    #[test]
    fn sampled_round_trip() {
        let f = SampledFunction::from_fn(|t| (-t).exp(), 40.0, 256).unwrap();
        for u in [0.5, 1.0, 3.0] {
            let exact = 1.0 / (1.0 + u);
            let v = forward_laplace_sampled(&f, u).unwrap();
            assert!((v - exact).abs() < 1e-5, "u={u}: {v}");
            let q = forward_laplace(|t| f.eval(t), u).unwrap();
            assert!((q - v).abs() < 1e-8, "u={u}: {q} vs {v}");
        }
        // complex s: the transform is entire
        let s = Complex64::new(0.3, 2.0);
        let z = sampled_transform(&f, s);
        let exact = 1.0 / (1.0 + s);
        assert!((z - exact).norm() < 1e-4);
    }
}
