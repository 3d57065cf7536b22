use crate::fracops::SampledFunction;
use crate::specfun::{gamma_recip, MlParams, Prabhakar};
use crate::{Error, Result};

/// One `a · D^{-ν}` term of the kinetic equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub a: f64,
    pub nu: f64,
}

impl Term {
    pub fn new(a: f64, nu: f64) -> Self {
        Term { a, nu }
    }
}

/// The source function `f(t)` of the kinetic equation.
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingSpec {
    /// `f ≡ 1`
    Unit,
    /// `f(t) = t^{ρ-1}`
    PowerLaw {
        rho: f64,
    },
    /// `f(t) = t^{γ-1} E^δ_{ν,γ}(-(c t)^ν)`
    MlForcing {
        nu: f64,
        gamma: f64,
        delta: f64,
        c: f64,
    },
    Sampled(SampledFunction),
}

impl ForcingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ForcingSpec::Unit | ForcingSpec::Sampled(_) => Ok(()),
            ForcingSpec::PowerLaw { rho } => {
                if *rho > 0.0 && rho.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "power-law forcing needs rho > 0, got {rho}"
                    )))
                }
            }
            ForcingSpec::MlForcing {
                nu,
                gamma,
                delta,
                c,
            } => {
                MlParams::new(*nu, *gamma, *delta, 0.0)?;
                if *c > 0.0 && c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "forcing rate c must be > 0, got {c}"
                    )))
                }
            }
        }
    }

    /// `f(t)` as a reusable closure, valid for `0 <= t <= t_max`.
    pub fn evaluator(&self, t_max: f64) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync + '_>> {
        self.validate()?;
        Ok(match self {
            ForcingSpec::Unit => Box::new(|_| 1.0),
            ForcingSpec::PowerLaw { rho } => {
                let p = rho - 1.0;
                Box::new(move |t: f64| if p == 0.0 { 1.0 } else { t.powf(p) })
            }
            ForcingSpec::MlForcing {
                nu,
                gamma,
                delta,
                c,
            } => {
                let (nu, gamma, c) = (*nu, *gamma, *c);
                let ml = Prabhakar::new(nu, gamma, *delta, (c * t_max).powf(nu))?;
                Box::new(move |t: f64| {
                    let pre = if gamma == 1.0 {
                        1.0
                    } else {
                        t.powf(gamma - 1.0)
                    };
                    pre * ml.eval(-(c * t).powf(nu))
                })
            }
            ForcingSpec::Sampled(s) => Box::new(move |t| s.eval(t)),
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.evaluator(t)?(t))
    }

    /// `Some(ρ)` when `f(t) = t^{ρ-1}` exactly.
    pub(crate) fn power_exponent(&self) -> Option<f64> {
        match self {
            ForcingSpec::Unit => Some(1.0),
            ForcingSpec::PowerLaw { rho } => Some(*rho),
            _ => None,
        }
    }

    /// Exponents `e` of the leading `t^e` behaviour of `f` at the origin,
    /// and the step between successive exponents of its expansion.
    pub(crate) fn origin_expansion(&self) -> (f64, Option<f64>) {
        match self {
            ForcingSpec::Unit | ForcingSpec::Sampled(_) => (0.0, None),
            ForcingSpec::PowerLaw { rho } => (rho - 1.0, None),
            ForcingSpec::MlForcing { nu, gamma, .. } => (gamma - 1.0, Some(*nu)),
        }
    }

    /// `f(0^+)`; infinite when the forcing is singular at the origin.
    pub(crate) fn value_at_origin(&self) -> f64 {
        match self {
            ForcingSpec::Unit => 1.0,
            ForcingSpec::PowerLaw { rho } => {
                if *rho == 1.0 {
                    1.0
                } else if *rho > 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ForcingSpec::MlForcing { gamma, .. } => {
                if *gamma == 1.0 {
                    gamma_recip(1.0)
                } else if *gamma > 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ForcingSpec::Sampled(s) => s.values()[0],
        }
    }
}

/// `N(t) - N0 f(t) = -Σ_j a_j D^{-ν_j} N(t)`.
///
/// The first term is distinguished: the closed-form series expands around
/// `1 + a_1 s^{-ν_1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticProblem {
    pub n0: f64,
    pub terms: Vec<Term>,
    pub forcing: ForcingSpec,
}

impl KineticProblem {
    pub fn new(n0: f64, terms: Vec<Term>, forcing: ForcingSpec) -> Result<Self> {
        let p = KineticProblem { n0, terms, forcing };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n0 > 0.0 && self.n0.is_finite()) {
            return Err(Error::domain(format!("N0 must be > 0, got {}", self.n0)));
        }
        if self.terms.is_empty() {
            return Err(Error::domain("at least one term is required"));
        }
        for (j, t) in self.terms.iter().enumerate() {
            if !(t.a > 0.0 && t.a.is_finite() && t.nu > 0.0 && t.nu.is_finite()) {
                return Err(Error::domain(format!(
                    "term {} needs a > 0 and nu > 0, got a = {}, nu = {}",
                    j + 1,
                    t.a,
                    t.nu
                )));
            }
        }
        self.forcing.validate()
    }

    /// `ν` if the orders are `ν, 2ν, ..., nν`.
    pub fn common_order(&self) -> Option<f64> {
        let nu = self.terms[0].nu;
        let ok = self
            .terms
            .iter()
            .enumerate()
            .all(|(j, t)| (t.nu - (j as f64 + 1.0) * nu).abs() <= 1e-12 * t.nu);
        ok.then_some(nu)
    }
}

/// Outer-series truncation for the multinomial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub l_max: usize,
    pub tail_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            l_max: 40,
            tail_tol: 1e-10,
        }
    }
}
