//! Closed forms for the binomial and geometric special cases.

use super::problem::{ForcingSpec, KineticProblem, Term};
use super::series::ml_convolution;
use crate::specfun::{gamma, ml_prabhakar, MlParams, SeriesControls};
use crate::{Error, Result};

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("t must be > 0, got {t}")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be > 0, got {v}")))
    }
}

/// `N0 d/dt ∫_0^t f(u) E^n_{ν,1}(-c^ν (t-u)^ν) du`, the binomial case
/// `(1 + c^ν s^{-ν})^n`.
pub fn solve_theorem2(
    n0: f64,
    forcing: &ForcingSpec,
    nu: f64,
    c: f64,
    n: u32,
    t: f64,
) -> Result<f64> {
    check_positive("N0", n0)?;
    check_positive("nu", nu)?;
    check_positive("c", c)?;
    check_time(t)?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    forcing.validate()?;
    let lam = c.powf(nu);
    // s^{nν} / (s^ν + λ)^n = 1 - Σ_j C(n, j) λ^j s^{(n-j)ν} / (s^ν + λ)^n
    let mut d = forcing.eval(t)?;
    let mut binom = 1.0;
    for j in 1..=n {
        binom *= f64::from(n - j + 1) / f64::from(j);
        let b = f64::from(j) * nu;
        d -= binom * lam.powi(j as i32) * ml_convolution(forcing, nu, b, f64::from(n), lam, t)?;
    }
    Ok(n0 * d)
}

/// Single term `a = c^ν`.
pub fn solve_corollary21(n0: f64, forcing: &ForcingSpec, nu: f64, c: f64, t: f64) -> Result<f64> {
    solve_theorem2(n0, forcing, nu, c, 1, t)
}

/// Binomial case with forcing `t^{γ-1} E^δ_{ν,γ}(-(c t)^ν)`:
/// `N0 t^{γ-1} E^{δ+n}_{ν,γ}(-c^ν t^ν)`.
pub fn solve_corollary22(
    n0: f64,
    nu: f64,
    gamma_: f64,
    delta: f64,
    c: f64,
    n: u32,
    t: f64,
) -> Result<f64> {
    check_positive("N0", n0)?;
    check_positive("c", c)?;
    check_time(t)?;
    let p = MlParams::new(nu, gamma_, delta + f64::from(n), -(c * t).powf(nu))?;
    let e = ml_prabhakar(&p, &SeriesControls::default())?;
    Ok(n0 * t.powf(gamma_ - 1.0) * e)
}

/// Binomial case with forcing `t^{ρ-1}`: `N0 Γ(ρ) t^{ρ-1} E^n_{ν,ρ}(-c^ν t^ν)`.
pub fn solve_corollary23(n0: f64, rho: f64, nu: f64, c: f64, n: u32, t: f64) -> Result<f64> {
    check_positive("N0", n0)?;
    check_positive("rho", rho)?;
    check_positive("c", c)?;
    check_time(t)?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let p = MlParams::new(nu, rho, f64::from(n), -(c * t).powf(nu))?;
    let e = ml_prabhakar(&p, &SeriesControls::default())?;
    Ok(n0 * gamma(rho) * t.powf(rho - 1.0) * e)
}

/// Geometric case `a_j = a^j`, `ν_j = jν`, `j = 1..n`:
///
/// ```text
/// N0 { d/dt ∫ f(u) E_{(n+1)ν,1}[A (t-u)^{(n+1)ν}] du
///      - a ∫ f(u) (t-u)^{ν-1} E_{(n+1)ν,ν}[A (t-u)^{(n+1)ν}] du },   A = a^{n+1}
/// ```
pub fn solve_theorem3(
    n0: f64,
    forcing: &ForcingSpec,
    nu: f64,
    a: f64,
    n: u32,
    t: f64,
) -> Result<f64> {
    check_positive("N0", n0)?;
    check_positive("nu", nu)?;
    check_positive("a", a)?;
    check_time(t)?;
    if n < 2 {
        return Err(Error::domain(format!("n must be >= 2, got {n}")));
    }
    forcing.validate()?;
    let beta = f64::from(n + 1) * nu;
    let big_a = a.powi(n as i32 + 1);
    // d/dt of the first convolution is f(t) + A ∫ f(u) (t-u)^{β-1} E_{β,β}(A (t-u)^β) du
    let first = forcing.eval(t)? + big_a * ml_convolution(forcing, beta, beta, 1.0, -big_a, t)?;
    let second = ml_convolution(forcing, beta, nu, 1.0, -big_a, t)?;
    Ok(n0 * (first - a * second))
}

/// Equal-step orders `ν_j = jν`; identical to the general outer series.
pub fn check_equal_steps(p: &KineticProblem) -> Result<f64> {
    p.common_order()
        .ok_or_else(|| Error::domain("orders must be ν, 2ν, ..., nν for the equal-step solver"))
}

/// Terms `C(n, j) c^{jν}`, `jν` of the binomial case.
pub fn theorem2_terms(nu: f64, c: f64, n: u32) -> Vec<Term> {
    let mut binom = 1.0;
    (1..=n)
        .map(|j| {
            binom *= f64::from(n - j + 1) / f64::from(j);
            Term::new(binom * c.powf(f64::from(j) * nu), f64::from(j) * nu)
        })
        .collect()
}

/// Terms `a^j`, `jν` of the geometric case.
pub fn theorem3_terms(nu: f64, a: f64, n: u32) -> Vec<Term> {
    (1..=n)
        .map(|j| Term::new(a.powi(j as i32), f64::from(j) * nu))
        .collect()
}
