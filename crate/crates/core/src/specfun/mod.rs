//! Gamma-function utilities and the Mittag-Leffler family.

mod gamma;
mod mittag_leffler;

pub use gamma::{gamma, gamma_recip, ln_gamma, sin_pi};
pub use mittag_leffler::{
    ml_one, ml_prabhakar, ml_two, pochhammer, prabhakar_series, MlParams, Prabhakar,
    SeriesControls, SeriesSum, MAX_ARGUMENT, MAX_CANCELLATION,
};
