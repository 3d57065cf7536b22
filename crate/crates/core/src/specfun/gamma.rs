//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients)
//! with reflection for arguments below 1/2.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Arguments within this distance of a non-positive integer are poles.
const POLE_TOL: f64 = 1e-12;

fn lanczos_sum(x: f64) -> f64 {
    // x here is the shifted argument (original - 1)
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    // reduce to [-1, 1]
    let r = x % 2.0;
    let r = if r > 1.0 {
        r - 2.0
    } else if r < -1.0 {
        r + 2.0
    } else {
        r
    };
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn is_pole(x: f64) -> bool {
    x <= POLE_TOL && (x - x.round()).abs() < POLE_TOL
}

/// Gamma function for real `x`. Returns infinity at the poles and on overflow.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_pole(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x.fract() == 0.0 && x <= 30.0 {
        // exact factorials while they fit in the mantissa
        return (2..x as u32).fold(1.0, |acc, k| acc * f64::from(k));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so t^(z + 1/2) does not overflow before the exp() scales it down
    let p = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * p * (-t).exp() * p * lanczos_sum(z)
}

/// Natural log of |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if is_pole(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Reciprocal gamma function, an entire function.
///
/// Returns exactly zero at the non-positive integers (detected to within
/// 1e-12) and underflows gracefully to zero for large positive arguments.
pub fn gamma_recip(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    if x <= 171.0 {
        1.0 / gamma(x)
    } else {
        (-ln_gamma(x)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_values() {
        let mut fact = 1.0;
        for n in 1..25 {
            let g = gamma(n as f64);
            assert!((g / fact - 1.0).abs() < 1e-14, "Γ({n}) = {g}");
            fact *= n as f64;
        }
        assert_eq!(gamma_recip(1.0), 1.0);
    }

    #[test]
    fn poles_are_exact_zeros() {
        for n in 0..60 {
            assert_eq!(gamma_recip(-(n as f64)), 0.0);
        }
        assert!(gamma(-2.0).is_infinite());
    }

    #[test]
    fn half_integers() {
        let sqrt_pi = PI.sqrt();
        assert!((gamma_recip(0.5) - 0.564_189_583_547_756_3).abs() < 1e-15);
        assert!((gamma(-0.5) / (-2.0 * sqrt_pi) - 1.0).abs() < 1e-14);
        assert!((gamma(-1.5) / (4.0 * sqrt_pi / 3.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_arguments() {
        // Γ(170) = 169!
        let ln169 = (1..170).map(|k| (k as f64).ln()).sum::<f64>();
        assert!((ln_gamma(170.0) - ln169).abs() < 1e-11);
        assert!((gamma(170.0).ln() - ln169).abs() < 1e-11);
        assert!(gamma_recip(400.0) == 0.0);
    }

    #[test]
    fn sin_pi_reduction() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert!((sin_pi(2.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.25) + 0.5f64.sqrt()).abs() < 2e-16);
        assert!((sin_pi(101.75) + 0.5f64.sqrt()).abs() < 1e-14);
    }
}
