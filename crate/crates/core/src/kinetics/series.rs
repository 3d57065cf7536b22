//! Outer multinomial series for the multi-term equation.
//!
//! Expanding `1/(1 + Σ a_j s^{-ν_j})` around `1 + a_1 s^{-ν_1}` gives, per
//! outer index `l` and composition `r` of `l` over the remaining terms,
//!
//! ```text
//! (-1)^l · l!/Π r_μ! · Π a_{μ+1}^{r_μ} · ∫_0^t f(u) (t-u)^{B-1} E^{l+1}_{ν_1,B}(-a_1 (t-u)^{ν_1}) du
//! ```
//!
//! with `B = Σ ν_{μ+1} r_μ`. For `l = 0` the kernel carries a delta part and
//! the contribution is `f(t) - a_1 ∫ f(u) (t-u)^{ν_1-1} E_{ν_1,ν_1}(-a_1 (t-u)^{ν_1}) du`.

use super::compositions::{enumerate_compositions, MAX_COMPOSITIONS};
use super::problem::{ForcingSpec, KineticProblem, TruncationPolicy};
use crate::fracops::{singular_convolution, singular_convolution_fn, Kernel};
use crate::specfun::{gamma, ml_prabhakar, MlParams, Prabhakar, SeriesControls};
use crate::{Error, Result};

/// Consecutive terms that must fall below the tolerance before stopping.
const QUIET_TERMS: usize = 3;

/// Value of the outer series together with the number of terms used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
}

/// `∫_0^t f(u) (t-u)^{b-1} E^δ_{β,b}(-a (t-u)^β) du`.
pub(crate) fn ml_convolution(
    forcing: &ForcingSpec,
    beta: f64,
    b: f64,
    delta: f64,
    a: f64,
    t: f64,
) -> Result<f64> {
    if let Some(rho) = forcing.power_exponent() {
        // term-by-term Beta integrals keep the Prabhakar form
        let p = MlParams::new(beta, b + rho, delta, -a * t.powf(beta))?;
        let e = ml_prabhakar(&p, &SeriesControls::default())?;
        return Ok(gamma(rho) * t.powf(rho + b - 1.0) * e);
    }
    let ml = Prabhakar::new(beta, b, delta, a * t.powf(beta))?;
    let kernel = Kernel::new(b - 1.0, |lag: f64| ml.eval(-a * lag.powf(beta)))?;
    match forcing {
        ForcingSpec::Sampled(s) => singular_convolution(s, &kernel, t),
        _ => {
            let f = forcing.evaluator(t)?;
            singular_convolution_fn(f, &kernel, t)
        }
    }
}

/// Evaluates the outer series at `t > 0`.
pub fn outer_series(p: &KineticProblem, policy: &TruncationPolicy, t: f64) -> Result<SeriesValue> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    let lead = p.terms[0];
    let rest = &p.terms[1..];
    let f_t = p.forcing.eval(t)?;
    let mut sum = f_t - lead.a * ml_convolution(&p.forcing, lead.nu, lead.nu, 1.0, lead.a, t)?;
    if rest.is_empty() {
        return Ok(SeriesValue {
            value: p.n0 * sum,
            terms: 1,
        });
    }
    let mut quiet = 0;
    for l in 1..=policy.l_max {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let mut term = 0.0;
        for c in enumerate_compositions(l as u32, rest.len(), MAX_COMPOSITIONS)? {
            let mut coef = c.weight;
            let mut b = 0.0;
            for (r, tm) in c.parts.iter().zip(rest) {
                if *r > 0 {
                    coef *= tm.a.powi(*r as i32);
                    b += tm.nu * f64::from(*r);
                }
            }
            term += coef * ml_convolution(&p.forcing, lead.nu, b, (l + 1) as f64, lead.a, t)?;
        }
        sum += sign * term;
        if term.abs() <= policy.tail_tol * sum.abs() {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(SeriesValue {
                    value: p.n0 * sum,
                    terms: l + 1,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "outer multinomial series",
        terms: policy.l_max + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::problem::Term;

    fn two_term() -> KineticProblem {
        KineticProblem::new(
            1.0,
            vec![Term::new(1.0, 0.5), Term::new(0.5, 1.0)],
            ForcingSpec::Unit,
        )
        .unwrap()
    }

    #[test]
    fn matches_reference_values() {
        let p = two_term();
        let pol = TruncationPolicy {
            l_max: 200,
            tail_tol: 1e-13,
        };
        for (t, want) in [
            (0.1, 0.692_142_451_893_977_2),
            (1.0, 0.302_668_476_527_716_5),
        ] {
            let v = outer_series(&p, &pol, t).unwrap().value;
            assert!((v - want).abs() < 1e-11 * want, "t={t}: {v} vs {want}");
        }
        let three = KineticProblem::new(
            1.0,
            vec![
                Term::new(1.0, 0.5),
                Term::new(0.5, 0.75),
                Term::new(0.3, 1.0),
            ],
            ForcingSpec::Unit,
        )
        .unwrap();
        let v = outer_series(&three, &pol, 1.0).unwrap().value;
        assert!((v - 0.255_585_722_837_683_45).abs() < 1e-10, "{v}");
    }

    #[test]
    fn zero_truncation_fails() {
        let pol = TruncationPolicy {
            l_max: 0,
            tail_tol: 1e-10,
        };
        assert!(matches!(
            outer_series(&two_term(), &pol, 1.0),
            Err(Error::NonConvergence { .. })
        ));
    }
}
