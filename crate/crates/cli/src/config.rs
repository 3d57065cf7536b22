use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use fkin_core::diffusion::{DiffusionProblem, StableParams};
use fkin_core::fracops::SampledFunction;
use fkin_core::kinetics::{ForcingSpec, KineticProblem, Solver, Term, TruncationPolicy};
use fkin_core::specfun::MlParams;

use crate::error::{invalid, CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Kinetic,
    Diffusion,
    Levy,
    SpecfunEval,
    Verify,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self, name: &str) -> CliResult<Vec<f64>> {
        if self.count == 0 {
            return Err(CliError::config(format!("{name}: count must be >= 1")));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::config(format!(
                "{name}: start and stop must be finite"
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if !(self.stop > self.start) {
            return Err(CliError::config(format!(
                "{name}: stop must exceed start for a strictly increasing grid"
            )));
        }
        let n = (self.count - 1) as f64;
        let span = self.stop - self.start;
        Ok((0..self.count)
            .map(|i| self.start + span * i as f64 / n)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub l_max: Option<usize>,
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub mode: Mode,
    pub problem: serde_json::Value,
    pub time_grid: Option<GridSpec>,
    pub space_grid: Option<GridSpec>,
    pub output_path: Option<String>,
    #[serde(default = "auto")]
    pub solver_selector: String,
    pub truncation: Option<TruncationSpec>,
    /// Volterra step for verify mode.
    pub stepper_dt: Option<f64>,
    /// Relative tolerance against the contour oracle in verify mode.
    pub tolerance: Option<f64>,
    /// SHA-256 of the CSV this configuration must reproduce.
    pub expected_sha256: Option<String>,
}

fn auto() -> String {
    "auto".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    a: f64,
    nu: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ForcingJson {
    #[default]
    Unit,
    PowerLaw {
        rho: f64,
    },
    MittagLeffler {
        nu: f64,
        gamma: f64,
        delta: f64,
        c: f64,
    },
    Sampled {
        grid: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct KineticJson {
    #[serde(default = "one")]
    n0: f64,
    terms: Vec<TermJson>,
    #[serde(default)]
    forcing: ForcingJson,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffusionJson {
    alpha: f64,
    #[serde(default = "one")]
    diff_coeff: f64,
    dim: u8,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StableJson {
    rho: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MlJson {
    beta: f64,
    gamma: f64,
    #[serde(default = "one")]
    delta: f64,
}

/// A configuration checked against its mode, ready to run.
#[derive(Debug, Clone)]
pub enum Job {
    Kinetic {
        problem: KineticProblem,
        solver: Solver,
        policy: TruncationPolicy,
        times: Vec<f64>,
    },
    Diffusion {
        problem: DiffusionProblem,
        times: Vec<f64>,
        xs: Vec<f64>,
    },
    Levy {
        params: StableParams,
        times: Vec<f64>,
    },
    SpecfunEval {
        beta: f64,
        gamma: f64,
        delta: f64,
        zs: Vec<f64>,
    },
    Verify {
        problem: KineticProblem,
        solver: Solver,
        policy: TruncationPolicy,
        times: Vec<f64>,
        stepper_dt: f64,
        tolerance: f64,
    },
}

pub const DEFAULT_STEPPER_DT: f64 = 1.0 / 512.0;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

pub fn load(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> CliResult<RunConfig> {
    let cfg: RunConfig =
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(CliError::config(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            cfg.schema_version
        )));
    }
    Ok(cfg)
}

fn problem_as<T: DeserializeOwned>(cfg: &RunConfig, what: &str) -> CliResult<T> {
    serde_json::from_value(cfg.problem.clone())
        .map_err(|e| CliError::config(format!("problem is not a valid {what}: {e}")))
}

fn grid(spec: Option<GridSpec>, name: &str) -> CliResult<Vec<f64>> {
    spec.ok_or_else(|| CliError::config(format!("this mode needs a {name}")))?
        .points(name)
}

fn positive_times(spec: Option<GridSpec>) -> CliResult<Vec<f64>> {
    let t = grid(spec, "time_grid")?;
    if t[0] <= 0.0 {
        return Err(CliError::config("time_grid must start above 0"));
    }
    Ok(t)
}

fn unused(spec: &Option<GridSpec>, name: &str) -> CliResult<()> {
    match spec {
        Some(_) => Err(CliError::config(format!("{name} is not used by this mode"))),
        None => Ok(()),
    }
}

fn kinetic_problem(cfg: &RunConfig) -> CliResult<KineticProblem> {
    let k: KineticJson = problem_as(cfg, "kinetic problem")?;
    let forcing = match k.forcing {
        ForcingJson::Unit => ForcingSpec::Unit,
        ForcingJson::PowerLaw { rho } => ForcingSpec::PowerLaw { rho },
        ForcingJson::MittagLeffler {
            nu,
            gamma,
            delta,
            c,
        } => ForcingSpec::MlForcing {
            nu,
            gamma,
            delta,
            c,
        },
        ForcingJson::Sampled { grid, values } => {
            ForcingSpec::Sampled(SampledFunction::new(grid, values).map_err(invalid)?)
        }
    };
    let terms = k.terms.iter().map(|t| Term::new(t.a, t.nu)).collect();
    KineticProblem::new(k.n0, terms, forcing).map_err(invalid)
}

fn policy(cfg: &RunConfig) -> CliResult<TruncationPolicy> {
    let mut p = TruncationPolicy::default();
    if let Some(t) = cfg.truncation {
        if let Some(l) = t.l_max {
            p.l_max = l;
        }
        if let Some(tol) = t.tail_tol {
            if !(tol > 0.0) {
                return Err(CliError::config("truncation.tail_tol must be > 0"));
            }
            p.tail_tol = tol;
        }
    }
    Ok(p)
}

fn kinetic_only(cfg: &RunConfig) -> CliResult<()> {
    if cfg.stepper_dt.is_some() || cfg.tolerance.is_some() {
        return Err(CliError::config(
            "stepper_dt and tolerance are only used in verify mode",
        ));
    }
    Ok(())
}

impl RunConfig {
    /// Checks the mode against the problem and grids.
    pub fn job(&self) -> CliResult<Job> {
        if self.mode != Mode::Kinetic && self.mode != Mode::Verify {
            if self.solver_selector != "auto" {
                return Err(CliError::config(
                    "solver_selector applies to kinetic problems only",
                ));
            }
            if self.truncation.is_some() {
                return Err(CliError::config(
                    "truncation applies to kinetic problems only",
                ));
            }
            kinetic_only(self)?;
        }
        match self.mode {
            Mode::Kinetic => {
                kinetic_only(self)?;
                unused(&self.space_grid, "space_grid")?;
                let problem = kinetic_problem(self)?;
                let solver = Solver::from_name(&self.solver_selector, &problem).map_err(invalid)?;
                Ok(Job::Kinetic {
                    solver,
                    policy: policy(self)?,
                    times: positive_times(self.time_grid)?,
                    problem,
                })
            }
            Mode::Verify => {
                unused(&self.space_grid, "space_grid")?;
                let problem = kinetic_problem(self)?;
                let solver = Solver::from_name(&self.solver_selector, &problem).map_err(invalid)?;
                let stepper_dt = self.stepper_dt.unwrap_or(DEFAULT_STEPPER_DT);
                if !(stepper_dt > 0.0) {
                    return Err(CliError::config("stepper_dt must be > 0"));
                }
                let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
                if !(tolerance > 0.0) {
                    return Err(CliError::config("tolerance must be > 0"));
                }
                Ok(Job::Verify {
                    solver,
                    policy: policy(self)?,
                    times: positive_times(self.time_grid)?,
                    problem,
                    stepper_dt,
                    tolerance,
                })
            }
            Mode::Diffusion => {
                let d: DiffusionJson = problem_as(self, "diffusion problem")?;
                let problem =
                    DiffusionProblem::new(d.alpha, d.diff_coeff, d.dim).map_err(invalid)?;
                if problem.dim == 2 {
                    return Err(CliError::config(
                        "dim = 2 has no series representation; only dims 1 and 3 can be tabulated",
                    ));
                }
                let xs = grid(self.space_grid, "space_grid")?;
                if xs[0] < 0.0 || (problem.dim == 3 && xs[0] == 0.0) {
                    return Err(CliError::config(
                        "space_grid must start at x >= 0 (x > 0 in three dimensions)",
                    ));
                }
                Ok(Job::Diffusion {
                    problem,
                    times: positive_times(self.time_grid)?,
                    xs,
                })
            }
            Mode::Levy => {
                unused(&self.space_grid, "space_grid")?;
                let s: StableJson = problem_as(self, "stable law")?;
                Ok(Job::Levy {
                    params: StableParams::new(s.rho).map_err(invalid)?,
                    times: positive_times(self.time_grid)?,
                })
            }
            Mode::SpecfunEval => {
                unused(&self.time_grid, "time_grid")?;
                let m: MlJson = problem_as(self, "Mittag-Leffler parameter set")?;
                MlParams::new(m.beta, m.gamma, m.delta, 0.0).map_err(invalid)?;
                Ok(Job::SpecfunEval {
                    beta: m.beta,
                    gamma: m.gamma,
                    delta: m.delta,
                    zs: grid(self.space_grid, "space_grid")?,
                })
            }
        }
    }
}
