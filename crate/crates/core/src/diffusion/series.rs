use crate::specfun::{gamma, gamma_recip};
use crate::{Error, Result};

/// Largest `A = x²/(D t^α)` at which the single-sum series are trusted.
pub const SERIES_RADIUS: f64 = 36.0;

const MAX_TERMS: usize = 600;

/// Partial sum with the sum of absolute terms, for cancellation checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summed {
    pub value: f64,
    pub abs_sum: f64,
}

impl Summed {
    pub fn cancellation(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.abs_sum / self.value.abs()
        }
    }
}

/// Sums `term(l)` for `l = 0, 1, ...` until three consecutive terms are
/// negligible, skipping exact zeros from poles.
pub(crate) fn sum_terms<F: FnMut(usize) -> f64>(what: &'static str, mut term: F) -> Result<Summed> {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    for l in 0..MAX_TERMS {
        let v = term(l);
        if !v.is_finite() {
            return Err(Error::NonConvergence { what, terms: l });
        }
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs_sum += v.abs();
        if v.abs() <= 1e-17 * abs_sum {
            quiet += 1;
            if quiet >= 3 && l > 4 {
                return Ok(Summed {
                    value: sum,
                    abs_sum,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what,
        terms: MAX_TERMS,
    })
}

fn check_radius(a: f64) -> Result<()> {
    if a > SERIES_RADIUS {
        Err(Error::NonConvergence {
            what: "diffusion series beyond the validated radius A <= 36",
            terms: 0,
        })
    } else {
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

/// `Σ_l (-1)^l A^{l/2} / (l! Γ(1 - α(l+1)/2))`; the one-dimensional
/// solution is this sum over `2 √(D t^α)`.
pub fn series_n1_summed(alpha: f64, a: f64) -> Result<Summed> {
    check_alpha(alpha)?;
    if !(a >= 0.0) {
        return Err(Error::domain(format!("A must be >= 0, got {a}")));
    }
    check_radius(a)?;
    let y = a.sqrt();
    let mut pow = 1.0;
    sum_terms("one-dimensional diffusion series", |l| {
        if l > 0 {
            pow *= -y / l as f64;
        }
        pow * gamma_recip(1.0 - alpha * (l as f64 + 1.0) / 2.0)
    })
}

pub fn series_n1(alpha: f64, a: f64) -> Result<f64> {
    series_n1_summed(alpha, a).map(|s| s.value)
}

/// `Σ_l (-1)^l A^{l/2} / (l! Γ(1 - α(1 + l/2)))`; the three-dimensional
/// solution is this sum over `4π (D t^α)^{3/2} A^{1/2}`.
pub fn series_n3_summed(alpha: f64, a: f64) -> Result<Summed> {
    check_alpha(alpha)?;
    if !(a > 0.0) {
        return Err(Error::domain(format!("A must be > 0, got {a}")));
    }
    check_radius(a)?;
    let y = a.sqrt();
    let mut pow = 1.0;
    sum_terms("three-dimensional diffusion series", |l| {
        if l > 0 {
            pow *= -y / l as f64;
        }
        pow * gamma_recip(1.0 - alpha * (1.0 + l as f64 / 2.0))
    })
}

pub fn series_n3(alpha: f64, a: f64) -> Result<f64> {
    series_n3_summed(alpha, a).map(|s| s.value)
}

/// Residue series of the H-function solution in `n` (odd) dimensions at
/// `z = x² / (4 D t^α)`, without the `π^{-n/2} |x|^{-n}` prefactor:
///
/// ```text
/// Σ_l Γ(1-n/2-l) (-1)^l z^{l+n/2} / (Γ(1-αn/2-αl) l!)
///   + Σ_l Γ(n/2-1-l) (-1)^l z^{1+l} / (Γ(1-α-αl) l!)
/// ```
pub fn residue_series(alpha: f64, dim: u8, z: f64) -> Result<Summed> {
    check_alpha(alpha)?;
    if dim.is_multiple_of(2) {
        return Err(Error::NotSupported(format!(
            "the residue series needs an odd dimension, got {dim}"
        )));
    }
    let n = f64::from(dim);
    let half = n / 2.0;
    let base = z.powf(half);
    let mut pow = 1.0;
    let first = sum_terms("diffusion residue series", |l| {
        if l > 0 {
            pow *= -z / l as f64;
        }
        let lf = l as f64;
        gamma(1.0 - half - lf) * pow * base * gamma_recip(1.0 - alpha * half - alpha * lf)
    })?;
    let mut pow = z;
    let second = sum_terms("diffusion residue series", |l| {
        if l > 0 {
            pow *= -z / l as f64;
        }
        let lf = l as f64;
        gamma(half - 1.0 - lf) * pow * gamma_recip(1.0 - alpha - alpha * lf)
    })?;
    Ok(Summed {
        value: first.value + second.value,
        abs_sum: first.abs_sum + second.abs_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_sums() {
        let v = series_n1(0.5, 1.0).unwrap();
        assert!((v - 0.383_335_416_570_683_5).abs() < 1e-14, "{v}");
        let v = series_n3(0.5, 1.0).unwrap();
        assert!((v - 0.312_304_769_134_981_65).abs() < 1e-14, "{v}");
        let v = series_n1(1.0, 0.0).unwrap();
        assert!((v - 0.564_189_583_547_756_3).abs() < 1e-15);
    }

    #[test]
    fn radius_is_enforced() {
        assert!(matches!(
            series_n1(0.5, 40.0),
            Err(Error::NonConvergence { .. })
        ));
        assert!(series_n3(0.5, 0.0).is_err());
    }

    #[test]
    fn residue_form_agrees_with_single_sums() {
        for alpha in [0.3, 0.5, 0.75, 1.0] {
            for a in [0.04f64, 0.5, 2.0, 9.0] {
                let z = a / 4.0;
                let x = a.sqrt();
                let pi = std::f64::consts::PI;
                let one = residue_series(alpha, 1, z).unwrap().value / (pi.sqrt() * x);
                let want = series_n1(alpha, a).unwrap() / 2.0;
                assert!(
                    (one - want).abs() < 1e-12 * want.abs().max(1e-3),
                    "{alpha} {a}"
                );
                let three = residue_series(alpha, 3, z).unwrap().value / (pi.powf(1.5) * x.powi(3));
                let want = series_n3(alpha, a).unwrap() / (4.0 * pi * x);
                assert!(
                    (three - want).abs() < 1e-11 * want.abs().max(1e-3),
                    "{alpha} {a}"
                );
            }
        }
    }
}
