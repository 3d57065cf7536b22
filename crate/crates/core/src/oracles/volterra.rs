//! Product-trapezoid marching for `N(t) + Σ a_j D^{-ν_j} N(t) = N0 f(t)`.
//!
//! The unknown is interpolated linearly between grid points, which makes
//! the weights for `D^{-ν}` exact on constants and linear functions. The
//! solution carries non-integer powers `t^σ` at the origin (sums of the
//! orders and of the forcing's own exponents), so each weight row gets a few
//! starting corrections on the first grid points that make it exact on those
//! powers as well.

use crate::fracops::SampledFunction;
use crate::kinetics::{ForcingSpec, KineticProblem};
use crate::specfun::{gamma_recip, ln_gamma};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperControls {
    pub dt: f64,
    pub t_end: f64,
}

impl StepperControls {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        let c = StepperControls { dt, t_end };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::domain(format!(
                "dt and t_end must be > 0, got dt = {}, t_end = {}",
                self.dt, self.t_end
            )));
        }
        if self.t_end / self.dt > 1e7 {
            return Err(Error::Resource(format!(
                "{} steps exceed the limit of 1e7",
                self.t_end / self.dt
            )));
        }
        Ok(())
    }
}

const MAX_CORRECTIONS: usize = 4;
const MIN_SEPARATION: f64 = 0.05;

/// Non-integer exponents below 2 in the expansion of `N` at the origin.
fn origin_exponents(p: &KineticProblem) -> Vec<f64> {
    let (base, step) = p.forcing.origin_expansion();
    let mut gens: Vec<f64> = p.terms.iter().map(|t| t.nu).collect();
    gens.extend(step);
    let mut found = vec![base];
    let mut frontier = vec![base];
    while let Some(e) = frontier.pop() {
        for g in &gens {
            let next = e + g;
            if next < 2.0 && !found.iter().any(|x| (x - next).abs() < 1e-12) {
                found.push(next);
                frontier.push(next);
            }
        }
    }
    found.sort_by(f64::total_cmp);
    let mut kept: Vec<f64> = vec![0.0, 1.0];
    let mut out = Vec::new();
    for e in found {
        if e <= 0.0 || out.len() == MAX_CORRECTIONS {
            continue;
        }
        if kept.iter().all(|k| (k - e).abs() >= MIN_SEPARATION) {
            kept.push(e);
            out.push(e);
        }
    }
    out
}

/// Solves `A x = b` for a small dense system by partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[piv][col] == 0.0 {
            return Err(Error::SingularStep { t: 0.0 });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

/// Weights of one `D^{-ν}` term in grid-index units (multiply by `h^ν`).
struct TermWeights {
    /// `(m+1)^{ν+1} - 2 m^{ν+1} + (m-1)^{ν+1}`, scaled, indexed by `m = k - i`
    interior: Vec<f64>,
    /// `(k-1)^{ν+1} - (k-1-ν) k^ν`, scaled, indexed by `k`
    first: Vec<f64>,
    diag: f64,
    /// starting corrections on nodes `0..M`, per step `k`
    starting: Vec<Vec<f64>>,
}

fn second_difference(m: usize, p: f64) -> f64 {
    let mf = m as f64;
    if m <= 16 {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // 2 Σ_j C(p, 2j) m^{p-2j}, free of cancellation
    let x = 1.0 / (mf * mf);
    let mut c = 1.0;
    let mut sum = 0.0;
    let mut pow = 1.0;
    for j in 1..12 {
        let jj = f64::from(j);
        c *= (p - 2.0 * jj + 2.0) * (p - 2.0 * jj + 1.0) / ((2.0 * jj - 1.0) * (2.0 * jj));
        pow *= x;
        sum += c * pow;
        if (c * pow).abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 * mf.powf(p) * sum
}

impl TermWeights {
    fn new(nu: f64, steps: usize, exponents: &[f64]) -> Result<Self> {
        let p = nu + 1.0;
        let norm = gamma_recip(nu + 2.0);
        let interior: Vec<f64> = (0..=steps)
            .map(|m| {
                if m == 0 {
                    0.0
                } else {
                    norm * second_difference(m, p)
                }
            })
            .collect();
        let first: Vec<f64> = (0..=steps)
            .map(|k| {
                let kf = k as f64;
                if k == 0 {
                    0.0
                } else {
                    norm * ((kf - 1.0).powf(p) - (kf - 1.0 - nu) * kf.powf(nu))
                }
            })
            .collect();
        let mut w = TermWeights {
            interior,
            first,
            diag: norm,
            starting: Vec::new(),
        };
        if !exponents.is_empty() {
            w.starting = w.corrections(nu, steps, exponents)?;
        }
        Ok(w)
    }

    /// Weight of node `i` in row `k` (without corrections).
    fn at(&self, k: usize, i: usize) -> f64 {
        if i == k {
            self.diag
        } else if i == 0 {
            self.first[k]
        } else {
            self.interior[k - i]
        }
    }

    fn corrections(&self, nu: f64, steps: usize, sigmas: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mut all = vec![0.0, 1.0];
        all.extend_from_slice(sigmas);
        let m = all.len();
        let powers: Vec<Vec<f64>> = all
            .iter()
            .map(|&e| {
                (0..=steps)
                    .map(|i| if e == 0.0 { 1.0 } else { (i as f64).powf(e) })
                    .collect()
            })
            .collect();
        let matrix: Vec<Vec<f64>> = (0..m).map(|p| powers[p][..m].to_vec()).collect();
        let moments: Vec<f64> = all
            .iter()
            .map(|&e| (ln_gamma(e + 1.0) - ln_gamma(e + nu + 1.0)).exp())
            .collect();
        let mut out = Vec::with_capacity(steps + 1);
        out.push(vec![0.0; m]);
        for k in 1..=steps {
            let rhs: Vec<f64> = (0..m)
                .map(|p| {
                    let exact = moments[p] * (k as f64).powf(all[p] + nu);
                    let mut s = 0.0;
                    let mut comp = 0.0;
                    for i in 0..=k {
                        let y = self.at(k, i) * powers[p][i] - comp;
                        let t = s + y;
                        comp = (t - s) - y;
                        s = t;
                    }
                    exact - s
                })
                .collect();
            out.push(solve_dense(matrix.clone(), rhs)?);
        }
        Ok(out)
    }
}

/// Marches the kinetic equation on a uniform grid of step `dt` up to the
/// first grid point at or beyond `t_end`.
pub fn volterra_solve(p: &KineticProblem, c: &StepperControls) -> Result<SampledFunction> {
    p.validate()?;
    c.validate()?;
    let f0 = p.forcing.value_at_origin();
    if !f0.is_finite() {
        return Err(Error::domain(
            "the stepper needs a forcing that is bounded at t = 0",
        ));
    }
    if let ForcingSpec::Sampled(s) = &p.forcing {
        if c.t_end > s.t_max() * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "t_end = {} is beyond the sampled forcing (t_max = {})",
                c.t_end,
                s.t_max()
            )));
        }
    }
    let steps = (c.t_end / c.dt - 1e-9).ceil().max(1.0) as usize;
    let h = c.dt;
    let sigmas = origin_exponents(p);
    let weights: Vec<TermWeights> = p
        .terms
        .iter()
        .map(|tm| TermWeights::new(tm.nu, steps, &sigmas))
        .collect::<Result<_>>()?;
    let scale: Vec<f64> = p.terms.iter().map(|tm| tm.a * h.powf(tm.nu)).collect();
    let grid: Vec<f64> = (0..=steps).map(|k| k as f64 * h).collect();
    let f = p.forcing.evaluator(grid[steps])?;
    let rhs: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(k, &t)| p.n0 * if k == 0 { f0 } else { f(t) })
        .collect();

    let mut n = vec![0.0; steps + 1];
    n[0] = rhs[0];
    let ncorr = if sigmas.is_empty() {
        0
    } else {
        sigmas.len() + 2
    };
    // rows 1..joint share unknowns through the starting corrections
    let joint = ncorr.saturating_sub(1).min(steps);
    if joint > 0 {
        let mut a = vec![vec![0.0; joint]; joint];
        let mut b = vec![0.0; joint];
        for k in 1..=joint {
            let row = k - 1;
            b[row] = rhs[k];
            a[row][row] += 1.0;
            for (w, sc) in weights.iter().zip(&scale) {
                for i in 0..=k {
                    let wi = sc * w.at(k, i);
                    if i == 0 {
                        b[row] -= wi * n[0];
                    } else {
                        a[row][i - 1] += wi;
                    }
                }
                for (m, s) in w.starting[k].iter().enumerate() {
                    if m == 0 {
                        b[row] -= sc * s * n[0];
                    } else {
                        a[row][m - 1] += sc * s;
                    }
                }
            }
        }
        let x = solve_dense(a, b).map_err(|_| Error::SingularStep { t: grid[1] })?;
        n[1..=joint].copy_from_slice(&x);
    }
    for k in joint + 1..=steps {
        let mut lhs = 1.0;
        let mut acc = rhs[k];
        for (w, sc) in weights.iter().zip(&scale) {
            lhs += sc * w.diag;
            let mut hist = w.first[k] * n[0];
            for i in 1..k {
                hist += w.interior[k - i] * n[i];
            }
            if ncorr > 0 {
                hist += w.starting[k]
                    .iter()
                    .zip(&n[..ncorr])
                    .map(|(s, v)| s * v)
                    .sum::<f64>();
            }
            acc -= sc * hist;
        }
        if lhs == 0.0 {
            return Err(Error::SingularStep { t: grid[k] });
        }
        n[k] = acc / lhs;
    }
    SampledFunction::new(grid, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::Term;

    #[test]
    fn classical_decay() {
        let p = KineticProblem::new(1.0, vec![Term::new(1.0, 1.0)], ForcingSpec::Unit).unwrap();
        let sol = volterra_solve(&p, &StepperControls::new(1.0 / 512.0, 5.0).unwrap()).unwrap();
        let err = sol
            .grid()
            .iter()
            .zip(sol.values())
            .map(|(t, v)| (v - (-t).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn exponent_sets() {
        let p = KineticProblem::new(
            1.0,
            vec![Term::new(1.0, 0.5), Term::new(0.5, 1.0)],
            ForcingSpec::Unit,
        )
        .unwrap();
        assert_eq!(origin_exponents(&p), vec![0.5, 1.5]);
        let q = KineticProblem::new(1.0, vec![Term::new(1.0, 1.0)], ForcingSpec::Unit).unwrap();
        assert!(origin_exponents(&q).is_empty());
    }

    #[test]
    fn fractional_reference() {
        let p = KineticProblem::new(
            1.0,
            vec![Term::new(1.0, 0.5), Term::new(0.5, 1.0)],
            ForcingSpec::Unit,
        )
        .unwrap();
        let sol = volterra_solve(&p, &StepperControls::new(1.0 / 512.0, 5.0).unwrap()).unwrap();
        for (t, want) in [
            (0.1, 0.692_142_451_893_977_2),
            (1.0, 0.302_668_476_527_716_5),
            (5.0, 0.075_530_809_679_071_73),
        ] {
            let v = sol.eval(t);
            assert!((v - want).abs() < 1e-5 * want, "t={t}: {v} vs {want}");
        }
    }

    #[test]
    fn singular_forcing_is_rejected() {
        let p = KineticProblem::new(
            1.0,
            vec![Term::new(1.0, 0.5)],
            ForcingSpec::PowerLaw { rho: 0.5 },
        )
        .unwrap();
        assert!(volterra_solve(&p, &StepperControls::new(0.01, 1.0).unwrap()).is_err());
    }
}
