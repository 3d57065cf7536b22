//! Quadrature rules shared by the solvers and oracles.
//!
//! Two rules live here: a fixed-step tanh-sinh (double exponential) rule that
//! resolves algebraic endpoint singularities, and an adaptive 7/15-point
//! Gauss-Kronrod rule for smooth integrands on long intervals.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::{Error, Result};

/// One tanh-sinh node on the unit interval. `lo` and `hi` are the distances
/// from the node to the left and right endpoints, both computed without
/// cancellation so the integrand can evaluate `(t - u)^p` near `u = t`.
#[derive(Debug, Clone, Copy)]
struct Node {
    lo: f64,
    hi: f64,
    weight: f64,
}

const TS_STEP: f64 = 1.0 / 32.0;
const TS_MIN_DIST: f64 = 1e-300;

fn tanh_sinh_nodes() -> &'static [Node] {
    static NODES: OnceLock<Vec<Node>> = OnceLock::new();
    NODES.get_or_init(|| {
        let mut nodes = Vec::new();
        let mut k = 0i32;
        loop {
            let x = f64::from(k) * TS_STEP;
            let v = FRAC_PI_2 * x.sinh();
            let e = (-2.0 * v).exp();
            // hi = 1/(1 + e^{2v}), lo = 1/(1 + e^{-2v})
            let hi = e / (1.0 + e);
            let lo = 1.0 / (1.0 + e);
            if hi < TS_MIN_DIST {
                break;
            }
            // d/dx of (1 + tanh v)/2, written with e^{-2v} to avoid overflow
            let weight = FRAC_PI_2 * x.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e)) * TS_STEP;
            if k == 0 {
                nodes.push(Node { lo, hi, weight });
            } else {
                nodes.push(Node { lo, hi, weight });
                nodes.push(Node {
                    lo: hi,
                    hi: lo,
                    weight,
                });
            }
            k += 1;
        }
        nodes
    })
}

/// Integrates over `[a, b]` with the fixed tanh-sinh rule.
///
/// The integrand receives `(u - a, b - u)`. The node set is fixed, so the
/// result varies smoothly with the interval endpoints, which keeps numerical
/// differentiation of parameter-dependent integrals stable.
pub fn tanh_sinh<F>(a: f64, b: f64, mut f: F) -> f64
where
    F: FnMut(f64, f64) -> f64,
{
    let len = b - a;
    if len == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for node in tanh_sinh_nodes() {
        let v = f(len * node.lo, len * node.hi);
        if v == 0.0 {
            continue;
        }
        // Kahan summation
        let y = v * node.weight - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum * len
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration on a finite interval.
///
/// Bisects the interval with the largest error estimate until the total
/// estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn gauss_kronrod<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let (total, err): (f64, f64) = pieces
            .iter()
            .fold((0.0, 0.0), |(s, r), p| (s + p.2, r + p.3));
        if !total.is_finite() {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (non-finite integrand)",
                terms: pieces.len(),
            });
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                terms: pieces.len(),
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        // int_0^1 s^{-1/2} ds = 2
        let v = tanh_sinh(0.0, 1.0, |_, hi| hi.powf(-0.5));
        assert!((v - 2.0).abs() < 1e-13, "{v}");
        // int_0^1 u^{-0.9} ds = 10
        let v = tanh_sinh(0.0, 1.0, |lo, _| lo.powf(-0.9));
        assert!((v - 10.0).abs() < 1e-10, "{v}");
        let v = tanh_sinh(0.0, 2.0, |lo, _| lo.exp());
        assert!((v - (2f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn gauss_kronrod_smooth() {
        let v = gauss_kronrod(|x| (-x).exp(), 0.0, 40.0, 1e-14, 1e-14).unwrap();
        assert!((v - (1.0 - (-40f64).exp())).abs() < 1e-13);
        let v = gauss_kronrod(|x| x.sqrt(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }
}
