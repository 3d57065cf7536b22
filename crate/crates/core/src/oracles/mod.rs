//! Independent numerical ground truth: Laplace transforms in both
//! directions and a direct Volterra stepper.

mod laplace;
mod volterra;

pub use laplace::{
    forcing_transform, forward_laplace, forward_laplace_sampled, invert_laplace, kinetic_transform,
    kinetic_transform_signed, sampled_transform, TalbotControls,
};
pub use volterra::{volterra_solve, StepperControls};

use crate::kinetics::KineticProblem;
use crate::Result;

/// `N(t)` by Talbot inversion of the Laplace-domain solution.
pub fn kinetic_by_inversion(p: &KineticProblem, t: f64, c: &TalbotControls) -> Result<f64> {
    p.validate()?;
    invert_laplace(|s| kinetic_transform(p, s), t, c)
}
