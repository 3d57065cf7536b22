//! Fractional kinetic equations and the time-fractional diffusion equation.
//!
//! The crate evaluates closed-form solutions of the multi-term fractional
//! kinetic equation
//!
//! ```text
//! N(t) - N0 f(t) = - sum_j a_j D^{-nu_j} N(t)
//! ```
//!
//! (where `D^{-nu}` is the Riemann-Liouville fractional integral) in terms of
//! Prabhakar-type Mittag-Leffler functions, together with the fundamental
//! solution of the time-fractional diffusion equation and the one-sided Lévy
//! stable density. Every closed form can be checked against two independent
//! numerical oracles in [`oracles`]: a Talbot-contour inverse Laplace
//! transform and a product-integration Volterra stepper.

pub mod diffusion;
pub mod error;
pub mod fracops;
pub mod kinetics;
pub mod oracles;
pub mod quad;
pub mod specfun;
pub mod talbot;
pub mod verification;

pub use error::{Error, Result};
