use rayon::prelude::*;
use sha2::{Digest, Sha256};

use fkin_core::diffusion::{fundamental_solution, levy_density};
use fkin_core::specfun::{ml_prabhakar, MlParams, SeriesControls};
use fkin_core::verification::compare_kinetic;

use crate::config::Job;
use crate::error::{CliError, CliResult};

/// Header plus numeric rows, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// Evaluates `f` over `points` in parallel; the first failure in grid order wins.
fn tabulate<P, F>(points: &[P], f: F) -> CliResult<Vec<Vec<f64>>>
where
    P: Sync,
    F: Fn(&P) -> CliResult<Vec<f64>> + Sync + Send,
{
    let rows: Vec<CliResult<Vec<f64>>> = points.par_iter().map(f).collect();
    rows.into_iter().collect()
}

pub struct Outcome {
    pub table: Table,
    /// Set when the run finished but a built-in check did not hold.
    pub failure: Option<String>,
    pub summary: Option<String>,
}

pub fn execute(job: &Job) -> CliResult<Outcome> {
    let plain = |table| Outcome {
        table,
        failure: None,
        summary: None,
    };
    match job {
        Job::Kinetic {
            problem,
            solver,
            policy,
            times,
        } => {
            let rows = tabulate(times, |&t| {
                let v = solver
                    .evaluate(problem, policy, t)
                    .map_err(|e| CliError::solver(format!("{} at t = {t}", solver.name()), e))?;
                Ok(vec![t, v])
            })?;
            Ok(plain(Table {
                header: vec!["t", "value"],
                rows,
            }))
        }
        Job::Diffusion { problem, times, xs } => {
            let points: Vec<(f64, f64)> = times
                .iter()
                .flat_map(|&t| xs.iter().map(move |&x| (t, x)))
                .collect();
            let rows = tabulate(&points, |&(t, x)| {
                let v = fundamental_solution(problem, x, t).map_err(|e| {
                    CliError::solver(format!("diffusion solution at t = {t}, x = {x}"), e)
                })?;
                Ok(vec![t, x, v])
            })?;
            Ok(plain(Table {
                header: vec!["t", "x", "value"],
                rows,
            }))
        }
        Job::Levy { params, times } => {
            let rows = tabulate(times, |&t| {
                let v = levy_density(params, t)
                    .map_err(|e| CliError::solver(format!("stable density at t = {t}"), e))?;
                Ok(vec![t, v])
            })?;
            Ok(plain(Table {
                header: vec!["t", "value"],
                rows,
            }))
        }
        Job::SpecfunEval {
            beta,
            gamma,
            delta,
            zs,
        } => {
            let rows = tabulate(zs, |&z| {
                let v = eval_ml(*beta, *gamma, *delta, z)?;
                Ok(vec![z, v])
            })?;
            Ok(plain(Table {
                header: vec!["z", "value"],
                rows,
            }))
        }
        Job::Verify {
            problem,
            solver,
            policy,
            times,
            stepper_dt,
            tolerance,
        } => {
            let cmp = compare_kinetic(problem, solver, policy, times, *stepper_dt)
                .map_err(|e| CliError::solver(format!("verification of {}", solver.name()), e))?;
            let worst = cmp.iter().fold(0.0f64, |m, r| m.max(r.rel_talbot));
            let worst_stepper = cmp.iter().fold(0.0f64, |m, r| m.max(r.rel_stepper));
            let rows = cmp
                .iter()
                .map(|r| {
                    vec![
                        r.t,
                        r.closed,
                        r.talbot,
                        r.stepper,
                        r.rel_talbot,
                        r.rel_stepper,
                    ]
                })
                .collect();
            let summary = format!(
                "{}: max rel err vs contour {worst:.3e} (tol {tolerance:e}), vs stepper {worst_stepper:.3e}",
                solver.name()
            );
            let failure = (!(worst <= *tolerance))
                .then(|| format!("closed form deviates from the contour oracle: {summary}"));
            Ok(Outcome {
                table: Table {
                    header: vec![
                        "t",
                        "closed_form",
                        "talbot",
                        "stepper",
                        "rel_err_talbot",
                        "rel_err_stepper",
                    ],
                    rows,
                },
                failure,
                summary: Some(summary),
            })
        }
    }
}

pub fn eval_ml(beta: f64, gamma: f64, delta: f64, z: f64) -> CliResult<f64> {
    let p = MlParams::new(beta, gamma, delta, z).map_err(crate::error::invalid)?;
    ml_prabhakar(&p, &SeriesControls::default())
        .map_err(|e| CliError::solver(format!("E^{delta}_{{{beta},{gamma}}}({z})"), e))
}

/// CSV bytes with shortest round-trip floats.
pub fn to_csv(table: &Table) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(&table.header).map_err(io)?;
    let mut buf = ryu::Buffer::new();
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|v| buf.format(*v).to_owned()).collect();
        w.write_record(&fields).map_err(io)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_shortest_round_trip() {
        let t = Table {
            header: vec!["t", "value"],
            rows: vec![vec![0.1, 1.0 / 3.0], vec![1e-7, 2.5e300]],
        };
        let text = String::from_utf8(to_csv(&t).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines[1], "0.1,0.3333333333333333");
        for line in &lines[1..] {
            for field in line.split(',') {
                let v: f64 = field.parse().unwrap();
                assert_eq!(v.to_string().parse::<f64>().unwrap(), v);
            }
        }
    }

    #[test]
    fn checksum_is_hex_sha256() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
