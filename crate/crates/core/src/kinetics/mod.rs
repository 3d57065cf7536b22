//! Fractional kinetic equations
//!
//! ```text
//! N(t) - N0 f(t) = -Σ_j a_j D^{-ν_j} N(t)
//! ```
//!
//! and their closed-form solutions.

mod closed;
mod compositions;
mod problem;
mod series;

use num_complex::Complex64;

pub use closed::{
    solve_corollary21, solve_corollary22, solve_corollary23, solve_theorem2, solve_theorem3,
    theorem2_terms, theorem3_terms,
};
pub use compositions::{composition_count, enumerate_compositions, Composition, MAX_COMPOSITIONS};
pub use problem::{ForcingSpec, KineticProblem, Term, TruncationPolicy};
pub use series::{outer_series, SeriesValue};

use crate::oracles::kinetic_transform;
use crate::{Error, Result};

/// Laplace-domain solution `N0 f̃(s) / (1 + Σ a_j s^{-ν_j})` for real `s > 0`.
pub fn laplace_domain(p: &KineticProblem, s: f64) -> Result<f64> {
    p.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("s must be > 0, got {s}")));
    }
    Ok(kinetic_transform(p, Complex64::new(s, 0.0)).re)
}

/// General multi-term solution by the outer multinomial series.
pub fn solve_theorem1(p: &KineticProblem, policy: &TruncationPolicy, t: f64) -> Result<f64> {
    outer_series(p, policy, t).map(|v| v.value)
}

/// Equal-step orders `ν_j = jν`.
pub fn solve_theorem4(p: &KineticProblem, policy: &TruncationPolicy, t: f64) -> Result<f64> {
    p.validate()?;
    closed::check_equal_steps(p)?;
    outer_series(p, policy, t).map(|v| v.value)
}

/// Which closed form evaluates a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    Theorem1,
    Theorem4,
    /// binomial `(1 + c^ν s^{-ν})^n`
    Theorem2 {
        nu: f64,
        c: f64,
        n: u32,
    },
    Corollary21 {
        nu: f64,
        c: f64,
    },
    Corollary22 {
        nu: f64,
        c: f64,
        n: u32,
    },
    Corollary23 {
        nu: f64,
        c: f64,
        n: u32,
    },
    /// geometric `a_j = a^j`
    Theorem3 {
        nu: f64,
        a: f64,
        n: u32,
    },
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs())
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::Theorem1 => "theorem1",
            Solver::Theorem4 => "theorem4",
            Solver::Theorem2 { .. } => "theorem2",
            Solver::Corollary21 { .. } => "corollary2.1",
            Solver::Corollary22 { .. } => "corollary2.2",
            Solver::Corollary23 { .. } => "corollary2.3",
            Solver::Theorem3 { .. } => "theorem3",
        }
    }

    /// The most specific closed form whose structure matches `p`.
    pub fn select(p: &KineticProblem) -> Solver {
        let Some(nu) = p.common_order() else {
            return Solver::Theorem1;
        };
        let n = p.terms.len() as u32;
        let c = (p.terms[0].a / f64::from(n)).powf(1.0 / nu);
        let binomial = theorem2_terms(nu, c, n)
            .iter()
            .zip(&p.terms)
            .all(|(x, y)| close(x.a, y.a));
        if binomial {
            match p.forcing {
                ForcingSpec::Unit => return Solver::Corollary23 { nu, c, n },
                ForcingSpec::PowerLaw { .. } => return Solver::Corollary23 { nu, c, n },
                ForcingSpec::MlForcing { nu: fnu, c: fc, .. } if close(fnu, nu) && close(fc, c) => {
                    return Solver::Corollary22 { nu, c, n }
                }
                _ if n == 1 => return Solver::Corollary21 { nu, c },
                _ => return Solver::Theorem2 { nu, c, n },
            }
        }
        let a = p.terms[0].a;
        let geometric = n >= 2
            && theorem3_terms(nu, a, n)
                .iter()
                .zip(&p.terms)
                .all(|(x, y)| close(x.a, y.a));
        if geometric {
            Solver::Theorem3 { nu, a, n }
        } else {
            Solver::Theorem4
        }
    }

    /// Parses a solver name; `"auto"` selects from the problem structure.
    pub fn from_name(name: &str, p: &KineticProblem) -> Result<Solver> {
        let auto = Solver::select(p);
        let chosen = match name {
            "auto" => return Ok(auto),
            "theorem1" => return Ok(Solver::Theorem1),
            "theorem4" => {
                closed::check_equal_steps(p)?;
                return Ok(Solver::Theorem4);
            }
            other => other,
        };
        let fits = matches!(
            (chosen, auto),
            ("theorem2", Solver::Theorem2 { .. })
                | ("theorem2", Solver::Corollary21 { .. })
                | ("theorem2", Solver::Corollary22 { .. })
                | ("theorem2", Solver::Corollary23 { .. })
                | ("corollary2.1", Solver::Corollary21 { .. })
                | ("corollary2.1", Solver::Corollary22 { n: 1, .. })
                | ("corollary2.1", Solver::Corollary23 { n: 1, .. })
                | ("corollary2.2", Solver::Corollary22 { .. })
                | ("corollary2.3", Solver::Corollary23 { .. })
                | ("theorem3", Solver::Theorem3 { .. })
        );
        if !fits {
            return Err(Error::NotSupported(format!(
                "solver '{chosen}' does not match the problem structure (auto selects '{}')",
                auto.name()
            )));
        }
        Ok(match (chosen, auto) {
            ("theorem2", Solver::Corollary21 { nu, c } | Solver::Theorem2 { nu, c, .. }) => {
                Solver::Theorem2 {
                    nu,
                    c,
                    n: p.terms.len() as u32,
                }
            }
            ("theorem2", Solver::Corollary22 { nu, c, n } | Solver::Corollary23 { nu, c, n }) => {
                Solver::Theorem2 { nu, c, n }
            }
            (
                "corollary2.1",
                Solver::Corollary22 { nu, c, .. } | Solver::Corollary23 { nu, c, .. },
            ) => Solver::Corollary21 { nu, c },
            _ => auto,
        })
    }

    /// `N(t)` for `p` by this solver.
    pub fn evaluate(&self, p: &KineticProblem, policy: &TruncationPolicy, t: f64) -> Result<f64> {
        p.validate()?;
        match *self {
            Solver::Theorem1 => solve_theorem1(p, policy, t),
            Solver::Theorem4 => solve_theorem4(p, policy, t),
            Solver::Theorem2 { nu, c, n } => solve_theorem2(p.n0, &p.forcing, nu, c, n, t),
            Solver::Corollary21 { nu, c } => solve_corollary21(p.n0, &p.forcing, nu, c, t),
            Solver::Corollary22 { nu, c, n } => match p.forcing {
                ForcingSpec::MlForcing { gamma, delta, .. } => {
                    solve_corollary22(p.n0, nu, gamma, delta, c, n, t)
                }
                _ => Err(Error::domain(
                    "corollary 2.2 needs a Mittag-Leffler forcing",
                )),
            },
            Solver::Corollary23 { nu, c, n } => match p.forcing.power_exponent() {
                Some(rho) => solve_corollary23(p.n0, rho, nu, c, n, t),
                None => Err(Error::domain("corollary 2.3 needs a power-law forcing")),
            },
            Solver::Theorem3 { nu, a, n } => solve_theorem3(p.n0, &p.forcing, nu, a, n, t),
        }
    }
}

/// A problem bound to a solver: `N(t)` on demand.
#[derive(Debug, Clone)]
pub struct Solution {
    pub problem: KineticProblem,
    pub solver: Solver,
    pub policy: TruncationPolicy,
}

impl Solution {
    pub fn new(problem: KineticProblem, solver: Solver, policy: TruncationPolicy) -> Result<Self> {
        problem.validate()?;
        Ok(Solution {
            problem,
            solver,
            policy,
        })
    }

    pub fn auto(problem: KineticProblem, policy: TruncationPolicy) -> Result<Self> {
        let solver = Solver::select(&problem);
        Solution::new(problem, solver, policy)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.solver.evaluate(&self.problem, &self.policy, t)
    }
}
