//! The acceptance matrix: every closed form against its oracles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::diffusion::{fundamental_solution, levy_density, DiffusionProblem, StableParams};
use crate::fracops::{rl_integral, SampledFunction};
use crate::kinetics::{
    solve_corollary22, solve_corollary23, solve_theorem2, theorem2_terms, theorem3_terms,
    ForcingSpec, KineticProblem, Solver, Term, TruncationPolicy,
};
use crate::oracles::{
    forward_laplace, invert_laplace, kinetic_transform_signed, volterra_solve, StepperControls,
    TalbotControls,
};
use crate::quad::gauss_kronrod;
use crate::specfun::{ml_one, ml_prabhakar, ml_two, prabhakar_series, MlParams, SeriesControls};
use crate::{Error, Result};

/// Deliberate defects used to check that the suite can fail.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Mutation {
    /// flips the sign of the memory terms in the Laplace-domain denominator
    pub flip_denominator: bool,
    /// overrides the outer-series cutoff
    pub l_max: Option<usize>,
}

impl Mutation {
    fn policy(&self) -> TruncationPolicy {
        let mut p = TruncationPolicy::default();
        if let Some(l) = self.l_max {
            p.l_max = l;
        }
        p
    }

    fn sign(&self) -> f64 {
        if self.flip_denominator {
            -1.0
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub results: Vec<CriterionResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.results
            .iter()
            .map(|r| {
                format!(
                    "criterion {:>2} {:<28} {}  {}",
                    r.id,
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.detail
                )
            })
            .collect()
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "special-function identities"),
    (2, "laplace pair inversion"),
    (3, "kinetic oracle triangle"),
    (4, "closed-form specializations"),
    (5, "gaussian limit"),
    (6, "mass conservation"),
    (7, "small-x plateau"),
    (8, "stable density identity"),
    (9, "stepper convergence order"),
    (10, "residual property"),
];

/// Criterion ids whose name or number contains `filter`.
pub fn select_criteria(filter: Option<&str>) -> Vec<u8> {
    CRITERIA
        .iter()
        .filter(|(id, name)| match filter {
            None => true,
            Some(f) => {
                let f = f.to_ascii_lowercase();
                name.contains(&f) || id.to_string() == f
            }
        })
        .map(|(id, _)| *id)
        .collect()
}

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: u8, m: &Mutation) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => special_functions(),
        2 => laplace_pair(),
        3 => oracle_triangle(m),
        4 => specializations(),
        5 => gaussian_limit(),
        6 => mass_conservation(),
        7 => plateau(),
        8 => stable_identity(),
        9 => stepper_order(m),
        10 => residuals(m),
        _ => Err(Error::domain(format!("no criterion {id}"))),
    };
    let (passed, detail) = match outcome {
        Ok(c) => (c.passed, c.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
    }
}

pub fn verify_suite(filter: Option<&str>, m: &Mutation) -> VerificationReport {
    VerificationReport {
        results: select_criteria(filter)
            .into_iter()
            .map(|id| run_criterion(id, m))
            .collect(),
    }
}

struct Check {
    passed: bool,
    detail: String,
}

fn check(worst: f64, tol: f64, what: &str) -> Check {
    Check {
        passed: worst <= tol,
        detail: format!("{what} {worst:.3e} (tol {tol:.0e})"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Argument range for the elementary identities.
pub const IDENTITY_RANGE: (f64, f64) = (-2.0, 8.0);

fn special_functions() -> Result<Check> {
    let c = SeriesControls::default();
    let mut worst = 0.0f64;
    // reduction chain over a (β, γ, z) lattice of 200 points
    for (i, z) in linspace(-4.0, 4.0, 200).enumerate() {
        let beta = 0.3 + 1.7 * ((i * 7) % 20) as f64 / 19.0;
        let g = 0.3 + 1.7 * ((i * 3) % 10) as f64 / 9.0;
        let p = ml_prabhakar(&MlParams::new(beta, g, 1.0, z)?, &c)?;
        worst = worst.max(rel(ml_two(beta, g, z, &c)?, p));
        let one = ml_prabhakar(&MlParams::new(beta, 1.0, 1.0, z)?, &c)?;
        worst = worst.max(rel(ml_one(beta, z, &c)?, one));
    }
    let (lo, hi) = IDENTITY_RANGE;
    for z in linspace(lo, hi, 200) {
        worst = worst.max(rel(ml_two(1.0, 1.0, z, &c)?, z.exp()));
        let e12 = if z == 0.0 { 1.0 } else { z.exp_m1() / z };
        worst = worst.max(rel(ml_two(1.0, 2.0, z, &c)?, e12));
        let e21 = if z >= 0.0 {
            z.sqrt().cosh()
        } else {
            (-z).sqrt().cos()
        };
        worst = worst.max(rel(ml_two(2.0, 1.0, z, &c)?, e21));
    }
    Ok(check(worst, 1e-12, "max rel err"))
}

/// Relative error floor for sweep points where the pair vanishes.
const ZERO_FLOOR: f64 = 1e-3;

fn laplace_pair() -> Result<Check> {
    let controls = TalbotControls::default();
    let series = SeriesControls::default();
    let mut worst = 0.0f64;
    for g in [0.5, 1.0, 1.5] {
        for beta in [0.5, 1.0, 1.5] {
            for delta in [1.0, 2.0] {
                for t in [0.25, 1.0, 4.0] {
                    let f = |s: Complex64| s.powf(-g) * (1.0 + s.powf(-beta)).powf(-delta);
                    let inv = invert_laplace(f, t, &controls)?;
                    let p = MlParams::new(beta, g, delta, -t.powf(beta))?;
                    let sum = prabhakar_series(&p, &series)?;
                    if sum.abs_sum * f64::EPSILON > 1e-12 {
                        return Err(Error::OracleFailure(format!(
                            "series lost too many digits at beta={beta}, t={t}"
                        )));
                    }
                    // E^2_{1,1}(-1) = 0 exactly; measure against the prefactor there
                    let scale = t.powf(g - 1.0);
                    let want = scale * sum.value;
                    let err = (inv - want).abs() / want.abs().max(ZERO_FLOOR * scale);
                    worst = worst.max(err);
                }
            }
        }
    }
    Ok(check(worst, 1e-6, "max rel err"))
}

/// A named kinetic problem with the closed form that evaluates it.
pub struct Canonical {
    pub name: &'static str,
    pub problem: KineticProblem,
    pub solver: Solver,
}

/// The six kinetic problems of the oracle triangle.
pub fn canonical_problems() -> Vec<Canonical> {
    let unit = |terms: Vec<Term>| KineticProblem {
        n0: 1.0,
        terms,
        forcing: ForcingSpec::Unit,
    };
    let mk = |name, problem: KineticProblem, solver: Option<Solver>| {
        let solver = solver.unwrap_or_else(|| Solver::select(&problem));
        Canonical {
            name,
            problem,
            solver,
        }
    };
    vec![
        mk("single nu=0.5", unit(vec![Term::new(1.0, 0.5)]), None),
        mk("single nu=1", unit(vec![Term::new(1.0, 1.0)]), None),
        mk(
            "two-term equal steps",
            unit(vec![Term::new(1.0, 0.5), Term::new(0.3, 1.0)]),
            None,
        ),
        mk(
            "three-term general",
            unit(vec![
                Term::new(1.0, 0.5),
                Term::new(0.5, 0.75),
                Term::new(0.3, 1.0),
            ]),
            None,
        ),
        mk(
            "binomial n=2",
            unit(theorem2_terms(0.5, 1.0, 2)),
            Some(Solver::Theorem2 {
                nu: 0.5,
                c: 1.0,
                n: 2,
            }),
        ),
        mk("geometric n=2", unit(theorem3_terms(0.5, 0.5, 2)), None),
    ]
}

pub const TRIANGLE_TIMES: [f64; 10] = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0];

fn talbot_oracle(p: &KineticProblem, t: f64, sign: f64) -> Result<f64> {
    invert_laplace(
        |s| kinetic_transform_signed(p, s, sign),
        t,
        &TalbotControls::default(),
    )
}

fn oracle_triangle(m: &Mutation) -> Result<Check> {
    let policy = m.policy();
    let mut vs_talbot = 0.0f64;
    let mut vs_stepper = 0.0f64;
    let stepper = StepperControls::new(1.0 / 512.0, 5.0)?;
    for c in canonical_problems() {
        let steps = volterra_solve(&c.problem, &stepper)?;
        for t in TRIANGLE_TIMES {
            let closed = c.solver.evaluate(&c.problem, &policy, t)?;
            let oracle = talbot_oracle(&c.problem, t, m.sign())?;
            vs_talbot = vs_talbot.max(rel(closed, oracle));
            vs_stepper = vs_stepper.max(rel(steps.eval(t), closed));
        }
    }
    let passed = vs_talbot <= 1e-6 && vs_stepper <= 1e-4;
    Ok(Check {
        passed,
        detail: format!(
            "vs talbot {vs_talbot:.3e} (tol 1e-6), vs stepper {vs_stepper:.3e} (tol 1e-4)"
        ),
    })
}

fn specializations() -> Result<Check> {
    let (nu, c, n) = (0.5, 1.0, 2);
    let mut worst = 0.0f64;
    for (g, delta) in [(1.0, 1.0), (1.3, 2.0)] {
        let forcing = ForcingSpec::MlForcing {
            nu,
            gamma: g,
            delta,
            c,
        };
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let direct = solve_corollary22(1.0, nu, g, delta, c, n, t)?;
            let conv = solve_theorem2(1.0, &forcing, nu, c, n, t)?;
            worst = worst.max(rel(conv, direct));
        }
    }
    for rho in [0.7, 1.0, 1.5, 2.0] {
        let forcing = ForcingSpec::PowerLaw { rho };
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let direct = solve_corollary23(1.0, rho, nu, c, n, t)?;
            let conv = solve_theorem2(1.0, &forcing, nu, c, n, t)?;
            worst = worst.max(rel(conv, direct));
        }
    }
    let mut exp_err = 0.0f64;
    for rate in [0.5, 1.0, 2.0] {
        for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = solve_corollary23(1.0, 1.0, 1.0, rate, 1, t)?;
            exp_err = exp_err.max(rel(v, (-rate * t).exp()));
        }
    }
    Ok(Check {
        passed: worst <= 1e-8 && exp_err <= 1e-10,
        detail: format!(
            "direct vs convolution {worst:.3e} (tol 1e-8), exponential {exp_err:.3e} (tol 1e-10)"
        ),
    })
}

fn gaussian_limit() -> Result<Check> {
    let mut worst = 0.0f64;
    for d in [0.5, 1.0, 2.0] {
        let p = DiffusionProblem::new(1.0, d, 1)?;
        for t in [0.25, 1.0, 4.0] {
            for x in linspace(0.0, 6.0 * (d * t).sqrt(), 121) {
                let v = fundamental_solution(&p, x, t)?;
                let heat = (-x * x / (4.0 * d * t)).exp() / (2.0 * (PI * d * t).sqrt());
                worst = worst.max(rel(v, heat));
            }
        }
    }
    Ok(check(worst, 1e-8, "max rel err"))
}

/// `∫ N(x, t) dx` over the real line for the one-dimensional solution.
pub fn total_mass(p: &DiffusionProblem, t: f64) -> Result<f64> {
    let f = |x: f64| fundamental_solution(p, x, t).unwrap_or(f64::NAN);
    let width = (p.diff_coeff * t.powf(p.alpha)).sqrt();
    let (mut a, mut b) = (0.0, 0.5 * width);
    let mut half = 0.0;
    loop {
        half += gauss_kronrod(f, a, b, 1e-14, 1e-12)?;
        if f(b) < 1e-16 / width || b > 1e4 * width {
            break;
        }
        a = b;
        b *= 1.5;
    }
    Ok(2.0 * half)
}

fn mass_conservation() -> Result<Check> {
    let mut worst = 0.0f64;
    for alpha in [0.5, 0.75] {
        let p = DiffusionProblem::new(alpha, 1.0, 1)?;
        for t in [0.5, 1.0, 2.0] {
            worst = worst.max((total_mass(&p, t)? - 1.0).abs());
        }
    }
    Ok(check(worst, 1e-6, "max |mass - 1|"))
}

/// Left end of the window on which `x N(x, t)` is checked for flatness.
pub const PLATEAU_X: f64 = 0.01;

fn plateau() -> Result<Check> {
    let p = DiffusionProblem::new(0.5, 1.0, 3)?;
    let vals: Vec<f64> = linspace(PLATEAU_X, 2.0 * PLATEAU_X, 21)
        .map(|x| fundamental_solution(&p, x, 1.0).map(|v| x * v))
        .collect::<Result<_>>()?;
    let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
    let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
    Ok(check(
        (hi - lo) / hi,
        0.05,
        &format!("variation on [{PLATEAU_X}, {}]", 2.0 * PLATEAU_X),
    ))
}

fn stable_identity() -> Result<Check> {
    let mut worst = 0.0f64;
    for rho in [0.25, 0.5, 0.75] {
        let sp = StableParams::new(rho)?;
        for u in [0.1f64, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let v = forward_laplace(|t| levy_density(&sp, t).unwrap_or(f64::NAN), u)?;
            worst = worst.max(rel(v, (-u.powf(rho)).exp()));
        }
    }
    let sp = StableParams::new(0.5)?;
    let mut point = 0.0f64;
    for t in linspace(0.2, 5.0, 97) {
        let exact = t.powf(-1.5) * (-0.25 / t).exp() / (2.0 * PI.sqrt());
        point = point.max(rel(levy_density(&sp, t)?, exact));
    }
    Ok(Check {
        passed: worst <= 1e-6 && point <= 1e-8,
        detail: format!(
            "laplace identity {worst:.3e} (tol 1e-6), rho=1/2 pointwise {point:.3e} (tol 1e-8)"
        ),
    })
}

/// Least-squares slope of `log err` against `log dt`.
fn fitted_slope(dts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn stepper_order(m: &Mutation) -> Result<Check> {
    let policy = m.policy();
    let dts = [1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0];
    let mut worst_slope = f64::INFINITY;
    let mut names = String::new();
    for c in canonical_problems() {
        let exact: Vec<f64> = TRIANGLE_TIMES
            .iter()
            .map(|&t| c.solver.evaluate(&c.problem, &policy, t))
            .collect::<Result<_>>()?;
        let mut errs = Vec::new();
        for dt in dts {
            let sol = volterra_solve(&c.problem, &StepperControls::new(dt, 5.0)?)?;
            let e = TRIANGLE_TIMES
                .iter()
                .zip(&exact)
                .map(|(&t, &x)| (sol.eval(t) - x).abs())
                .fold(0.0, f64::max);
            errs.push(e);
        }
        let slope = fitted_slope(&dts, &errs);
        if slope < worst_slope {
            worst_slope = slope;
            names = c.name.to_string();
        }
    }
    Ok(Check {
        passed: worst_slope >= 1.5,
        detail: format!("min slope {worst_slope:.3} on '{names}' (need >= 1.5)"),
    })
}

/// Closed-form solution sampled on a uniform grid over `[0, t_end]`.
pub fn sample_solution(
    c: &Canonical,
    policy: &TruncationPolicy,
    t_end: f64,
    points_per_unit: usize,
) -> Result<SampledFunction> {
    let n = (t_end * points_per_unit as f64).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Ok(c.problem.n0 * c.problem.forcing.value_at_origin())
            } else {
                c.solver.evaluate(&c.problem, policy, t)
            }
        })
        .collect::<Result<_>>()?;
    SampledFunction::new(grid, values)
}

/// `max_t |N - N0 f + Σ a_j D^{-ν_j} N| / max |N|` on the sample grid.
pub fn residual(p: &KineticProblem, n: &SampledFunction) -> Result<f64> {
    let f = p.forcing.evaluator(n.t_max())?;
    let peak = n.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut worst = 0.0f64;
    for (&t, &v) in n.grid().iter().zip(n.values()).skip(1) {
        let mut r = v - p.n0 * f(t);
        for tm in &p.terms {
            r += tm.a * rl_integral(n, tm.nu, t)?;
        }
        worst = worst.max(r.abs());
    }
    Ok(worst / peak)
}

pub const RESIDUAL_T_END: f64 = 2.0;

fn residuals(m: &Mutation) -> Result<Check> {
    let policy = m.policy();
    let mut worst = 0.0f64;
    let mut refines = true;
    for c in canonical_problems() {
        let fine = residual(
            &c.problem,
            &sample_solution(&c, &policy, RESIDUAL_T_END, 512)?,
        )?;
        let coarse = residual(
            &c.problem,
            &sample_solution(&c, &policy, RESIDUAL_T_END, 256)?,
        )?;
        worst = worst.max(fine);
        refines &= fine < coarse;
    }
    Ok(Check {
        passed: worst <= 1e-3 && refines,
        detail: format!(
            "max residual / max|N| {worst:.3e} (tol 1e-3), decreasing under refinement: {refines}"
        ),
    })
}

/// One row of a closed-form versus oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub t: f64,
    pub closed: f64,
    pub talbot: f64,
    pub stepper: f64,
    pub rel_talbot: f64,
    pub rel_stepper: f64,
}

/// Closed form, Talbot inversion and the Volterra stepper side by side.
pub fn compare_kinetic(
    p: &KineticProblem,
    solver: &Solver,
    policy: &TruncationPolicy,
    times: &[f64],
    dt: f64,
) -> Result<Vec<ComparisonRow>> {
    let t_end = times.iter().cloned().fold(0.0, f64::max);
    let steps = volterra_solve(p, &StepperControls::new(dt, t_end)?)?;
    times
        .iter()
        .map(|&t| {
            let closed = solver.evaluate(p, policy, t)?;
            let talbot = talbot_oracle(p, t, 1.0)?;
            let stepper = steps.eval(t);
            Ok(ComparisonRow {
                t,
                closed,
                talbot,
                stepper,
                rel_talbot: rel(closed, talbot),
                rel_stepper: rel(closed, stepper),
            })
        })
        .collect()
}
