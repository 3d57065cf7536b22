//! Riemann-Liouville fractional integration and weakly singular convolution.
//!
//! ```text
//! D^{-ν} f(t) = 1/Γ(ν) ∫_0^t (t-u)^{ν-1} f(u) du
//! ```
//!
//! Sampled functions are treated as their piecewise-linear interpolant and
//! integrated exactly against the power kernel (product integration), so the
//! `u = t` singularity never enters a quadrature rule.

use crate::quad::tanh_sinh;
use crate::specfun::gamma_recip;
use crate::{Error, Result};

/// A function known on a grid, interpolated piecewise-linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::domain("grid and values differ in length"));
        }
        if grid.len() < 2 {
            return Err(Error::domain(
                "a sampled function needs at least two points",
            ));
        }
        if grid[0] != 0.0 {
            return Err(Error::domain("grid must start at 0"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("grid must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("sampled values must be finite"));
        }
        Ok(SampledFunction { grid, values })
    }

    /// Samples `f` on `[0, t_end]` with `points_per_unit` points per unit time.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, t_end: f64, points_per_unit: usize) -> Result<Self> {
        let grid = uniform_grid(t_end, points_per_unit)?;
        let values = grid.iter().map(|&t| f(t)).collect();
        SampledFunction::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_max(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Linear interpolation; constant extension past the last point.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= self.t_max() {
            return *self.values.last().unwrap();
        }
        let i = self.grid.partition_point(|&g| g <= t) - 1;
        let (a, b) = (self.grid[i], self.grid[i + 1]);
        let w = (t - a) / (b - a);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.t_max()).contains(&t) {
            return Err(Error::domain(format!(
                "t = {t} outside the sampled span [0, {}]",
                self.t_max()
            )));
        }
        Ok(())
    }
}

/// `[0, t_end]` split into `ceil(t_end * points_per_unit)` equal steps.
pub fn uniform_grid(t_end: f64, points_per_unit: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || points_per_unit == 0 {
        return Err(Error::domain(
            "grid needs t_end > 0 and points_per_unit >= 1",
        ));
    }
    let steps = (t_end * points_per_unit as f64).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    Ok((0..=steps)
        .map(|k| if k == steps { t_end } else { k as f64 * h })
        .collect())
}

/// Exact moments of `(t-u)^{ν-1}` over `[a, b]` against `1` and `(u - a)`.
fn power_moments(t: f64, a: f64, b: f64, nu: f64) -> (f64, f64) {
    let da = t - a;
    let db = t - b;
    let m0 = (da.powf(nu) - db.powf(nu)) / nu;
    let m1 = da * m0 - (da.powf(nu + 1.0) - db.powf(nu + 1.0)) / (nu + 1.0);
    (m0, m1)
}

/// Riemann-Liouville integral of order `nu` of the interpolant of `f` at `t`.
pub fn rl_integral(f: &SampledFunction, nu: f64, t: f64) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::domain(format!("order must be >= 0, got {nu}")));
    }
    f.check_time(t)?;
    if nu == 0.0 {
        return Ok(f.eval(t));
    }
    let mut sum = 0.0;
    for i in 0..f.grid.len() - 1 {
        let a = f.grid[i];
        if a >= t {
            break;
        }
        let b = f.grid[i + 1].min(t);
        let fa = f.values[i];
        let slope = (f.values[i + 1] - fa) / (f.grid[i + 1] - a);
        let (m0, m1) = power_moments(t, a, b, nu);
        sum += fa * m0 + slope * m1;
    }
    Ok(sum * gamma_recip(nu))
}

/// Convolution kernel `(t-u)^{exponent} · modulator(t-u)`.
#[derive(Debug, Clone)]
pub struct Kernel<M> {
    pub exponent: f64,
    pub modulator: M,
}

impl<M: Fn(f64) -> f64> Kernel<M> {
    pub fn new(exponent: f64, modulator: M) -> Result<Self> {
        if !(exponent > -1.0) {
            return Err(Error::domain(format!(
                "kernel exponent must exceed -1, got {exponent}"
            )));
        }
        Ok(Kernel {
            exponent,
            modulator,
        })
    }

    #[inline]
    pub fn at(&self, lag: f64) -> f64 {
        lag.powf(self.exponent) * (self.modulator)(lag)
    }
}

const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `∫_0^t f(u) (t-u)^{e} m(t-u) du` for a sampled `f`.
///
/// The interpolant of `f` is linear on each grid piece. Pieces at least two
/// widths away from `u = t` use 8-point Gauss-Legendre; the last two pieces,
/// where the kernel is singular or non-smooth, use the tanh-sinh rule whose
/// nodes cluster geometrically at `u = t`.
pub fn singular_convolution<M>(f: &SampledFunction, k: &Kernel<M>, t: f64) -> Result<f64>
where
    M: Fn(f64) -> f64,
{
    f.check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let pieces: Vec<(f64, f64, usize)> = (0..f.grid.len() - 1)
        .take_while(|&i| f.grid[i] < t)
        .map(|i| (f.grid[i], f.grid[i + 1].min(t), i))
        .collect();
    let last = pieces.len();
    let mut sum = 0.0;
    for (idx, &(a, b, i)) in pieces.iter().enumerate() {
        let fa = f.values[i];
        let slope = (f.values[i + 1] - fa) / (f.grid[i + 1] - a);
        if idx + 2 >= last {
            // u = a + lo, t - u = (t - b) + hi
            sum += tanh_sinh(a, b, |lo, hi| (fa + slope * lo) * k.at((t - b) + hi));
        } else {
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            let mut piece = 0.0;
            for j in 0..4 {
                for sgn in [-1.0, 1.0] {
                    let u = c + sgn * r * GL8_X[j];
                    piece += GL8_W[j] * (fa + slope * (u - a)) * k.at(t - u);
                }
            }
            sum += piece * r;
        }
    }
    Ok(sum)
}

/// `∫_0^t f(u) (t-u)^{e} m(t-u) du` for a forcing given in closed form.
///
/// One tanh-sinh rule spans `[0, t]`, resolving algebraic singularities of
/// `f` at `u = 0` and of the kernel at `u = t`. The node set scales with
/// `t`, so the result is a smooth function of `t`.
pub fn singular_convolution_fn<F, M>(f: F, k: &Kernel<M>, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    if !(t >= 0.0) {
        return Err(Error::domain(format!("t must be >= 0, got {t}")));
    }
    Ok(tanh_sinh(0.0, t, |u, lag| f(u) * k.at(lag)))
}

/// Numerical derivative `g'(t)`.
///
/// Central differences at steps `h` and `2h` with `h = max(t, 1)·ε^{1/3}`,
/// combined by one Richardson step. Near `t = 0` (where `t - 2h < 0`) the
/// second-order forward formula is used instead, with the same extrapolation.
pub fn ddt<G: Fn(f64) -> f64>(g: G, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("t must be >= 0, got {t}")));
    }
    let h = t.max(1.0) * f64::EPSILON.cbrt();
    let d = |h: f64| {
        if t - 2.0 * h > 0.0 {
            (g(t + h) - g(t - h)) / (2.0 * h)
        } else {
            (-3.0 * g(t) + 4.0 * g(t + h) - g(t + 2.0 * h)) / (2.0 * h)
        }
    };
    let d1 = d(h);
    let d2 = d(2.0 * h);
    Ok((4.0 * d1 - d2) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{ml_two, SeriesControls};

    #[test]
    fn rl_of_constant() {
        let f = SampledFunction::from_fn(|_| 1.0, 1.0, 64).unwrap();
        let v = rl_integral(&f, 0.5, 1.0).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-13, "{v}");
    }

    #[test]
    fn rl_of_linear_is_exact() {
        let f = SampledFunction::from_fn(|u| u, 2.0, 8).unwrap();
        assert!((rl_integral(&f, 1.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        // D^{-ν} u = t^{ν+1}/Γ(ν+2); exact for the piecewise-linear interpolant
        let v = rl_integral(&f, 0.3, 1.7).unwrap();
        let want = 1.7f64.powf(1.3) * gamma_recip(2.3);
        assert!((v - want).abs() < 1e-13, "{v} vs {want}");
    }

    #[test]
    fn rl_of_exponential_matches_quadrature_oracle() {
        // mpmath quad, see tests/oracle/mpmath_values.py
        let f = SampledFunction::from_fn(|u| (-u).exp(), 1.5, 2048).unwrap();
        let v = rl_integral(&f, 0.7, 1.5).unwrap();
        assert!((v - 0.670_892_299_034_993_5).abs() < 1e-7, "{v}");
    }

    #[test]
    fn rl_order_zero_is_identity() {
        let f = SampledFunction::from_fn(|u| u * u, 1.0, 16).unwrap();
        assert_eq!(rl_integral(&f, 0.0, 0.5).unwrap(), f.eval(0.5));
    }

    #[test]
    fn rl_errors() {
        let f = SampledFunction::from_fn(|u| u, 1.0, 16).unwrap();
        assert!(matches!(rl_integral(&f, -0.1, 0.5), Err(Error::Domain(_))));
        assert!(matches!(rl_integral(&f, 0.5, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn sampled_function_validation() {
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(SampledFunction::new(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 1.0, 1.0], vec![1.0; 3]).is_err());
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn convolution_trivial_kernels() {
        let f = SampledFunction::from_fn(|_| 1.0, 3.0, 16).unwrap();
        let flat = Kernel::new(0.0, |_| 1.0).unwrap();
        assert!((singular_convolution(&f, &flat, 3.0).unwrap() - 3.0).abs() < 1e-13);
        let f = SampledFunction::from_fn(|_| 1.0, 1.0, 16).unwrap();
        let abel = Kernel::new(-0.5, |_| 1.0).unwrap();
        let v = singular_convolution(&f, &abel, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
        assert!(Kernel::new(-1.0, |_| 1.0).is_err());
    }

    #[test]
    fn convolution_with_mittag_leffler_modulator() {
        // mpmath reference: ∫_0^1 u² (1-u)^{-0.3} E_{0.9,0.7}(-(1-u)^{0.9}) du
        let reference = 0.361_327_770_711_926;
        let c = SeriesControls::default();
        let m = |s: f64| ml_two(0.9, 0.7, -s.powf(0.9), &c).unwrap();
        let k = Kernel::new(-0.3, m).unwrap();
        let closed = singular_convolution_fn(|u| u * u, &k, 1.0).unwrap();
        assert!((closed - reference).abs() < 1e-13, "{closed}");
        // sampled u² is only piecewise linear: error O(h²)
        let f = SampledFunction::from_fn(|u| u * u, 1.0, 512).unwrap();
        let sampled = singular_convolution(&f, &k, 1.0).unwrap();
        assert!((sampled - reference).abs() < 1e-6, "{sampled}");
    }

    #[test]
    fn derivative() {
        assert!((ddt(|t| t * t, 1.0).unwrap() - 2.0).abs() < 1e-8);
        let v = ddt(|t| (-2.0 * t).exp(), 0.5).unwrap();
        assert!((v + 2.0 * (-1f64).exp()).abs() < 1e-9, "{v}");
        let v = ddt(|t| t.sin(), 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
        assert!(ddt(|t| t, -1.0).is_err());
    }
}
