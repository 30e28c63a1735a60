//! Scalar special functions: log-gamma, the regularized lower incomplete
//! gamma function, the chi-square CDF, and the principal branch of the
//! Lambert W function.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("lambert_w0 is defined for x >= -1/e, got {0}")]
    LambertDomain(f64),
}

const LANCZOS_G: f64 = 7.0;
// Published g = 7, n = 9 coefficients, kept at their source precision.
#[allow(clippy::excessive_precision)]
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

/// Natural log of the gamma function, Lanczos approximation (g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const GAMMA_MAX_ITER: usize = 10_000;
const GAMMA_EPS: f64 = 1e-17;

/// Regularized lower incomplete gamma function P(a, x) = gamma(a, x) / Gamma(a).
///
/// Series expansion for x < a + 1, Lentz continued fraction for the
/// complementary function otherwise. Returns 0 for x <= 0.
pub fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && a.is_finite());
    if x <= 0.0 {
        return 0.0;
    }
    let ln_front = a * x.ln() - x - ln_gamma(a);
    if ln_front < -746.0 {
        // The prefactor underflows; the function is saturated on this side.
        return if x > a { 1.0 } else { 0.0 };
    }
    let front = ln_front.exp();
    if x < a + 1.0 {
        // P(a, x) = front * sum_{n>=0} x^n / (a (a+1) ... (a+n))
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..GAMMA_MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * GAMMA_EPS {
                break;
            }
        }
        front * sum
    } else {
        // Q(a, x) = front * continued fraction (modified Lentz).
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < GAMMA_EPS {
                break;
            }
        }
        1.0 - front * h
    }
}

/// CDF of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_cdf(dof: u64, x: f64) -> f64 {
    debug_assert!(dof >= 1);
    reg_lower_gamma(dof as f64 / 2.0, x / 2.0)
}

/// Principal branch W_0 of the Lambert W function: the solution of
/// w e^w = x with w >= -1, defined for x >= -1/e.
///
/// Halley iteration from a log-based initial guess; bisection fallback
/// guarantees the residual |w e^w - x| stays below 1e-12 max(1, |x|).
/// (An absolute bound cannot hold for large x: neighboring floating-point
/// values of w already move w e^w by more than 1e-12.)
pub fn lambert_w0(x: f64) -> Result<f64, SpecialError> {
    const NEG_INV_E: f64 = -1.0 / std::f64::consts::E;
    if !x.is_finite() || x < NEG_INV_E {
        return Err(SpecialError::LambertDomain(x));
    }
    if x == NEG_INV_E {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x > std::f64::consts::E {
        let l = x.ln();
        l - l.ln()
    } else if x > -0.32 {
        // ln(1 + x) matches W to first order around 0.
        x.ln_1p()
    } else {
        // Series about the branch point in p = sqrt(2 (1 + e x)).
        let p = (2.0 * (1.0 + std::f64::consts::E * x)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    if (w * w.exp() - x).abs() > 1e-12 * x.abs().max(1.0) {
        w = lambert_bisect(x);
    }
    Ok(w)
}

fn lambert_bisect(x: f64) -> f64 {
    let (mut lo, mut hi) = if x >= 0.0 {
        (0.0, x.ln().max(0.0) + 1.0)
    } else {
        (-1.0, 0.0)
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() < x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got}, want {want} (tol {tol})"
        );
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        for n in 1..15u64 {
            let fact: f64 = (1..n).map(|i| i as f64).product();
            assert_close(ln_gamma(n as f64), fact.ln(), 1e-12);
        }
        // Gamma(1/2) = sqrt(pi)
        assert_close(ln_gamma(0.5), 0.5 * std::f64::consts::PI.ln(), 1e-13);
    }

    #[test]
    fn incomplete_gamma_known_values() {
        // P(1, x) = 1 - exp(-x)
        for &x in &[0.1, 0.5, 1.0, 2.0, 5.0, 30.0] {
            assert_close(reg_lower_gamma(1.0, x), 1.0 - (-x).exp(), 1e-13);
        }
        // P(3, 2) = 1 - e^{-2} (1 + 2 + 2)
        assert_close(reg_lower_gamma(3.0, 2.0), 1.0 - 5.0 * (-2.0f64).exp(), 1e-13);
        // P(1/2, 1) = erf(1)
        assert_close(reg_lower_gamma(0.5, 1.0), 0.842_700_792_949_714_9, 1e-13);
        // Large shape, value near the mean: cross-checked against mpmath.
        assert_close(reg_lower_gamma(100.0, 100.0), 0.513_298_798_279_148_7, 1e-11);
    }

    #[test]
    fn incomplete_gamma_edges() {
        assert_eq!(reg_lower_gamma(2.5, 0.0), 0.0);
        assert_eq!(reg_lower_gamma(2.5, -3.0), 0.0);
        assert_close(reg_lower_gamma(2.0, 1e4), 1.0, 1e-15);
        // Monotone in x across the series/continued-fraction split.
        let mut prev = 0.0;
        let a = 4.0;
        for i in 0..2000 {
            let x = i as f64 * 0.01;
            let p = reg_lower_gamma(a, x);
            assert!(p >= prev - 1e-15, "not monotone at x={x}");
            assert!((0.0..=1.0).contains(&p));
            prev = p;
        }
    }

    #[test]
    fn chi_square_two_dof_is_exponential() {
        for &x in &[0.2, 1.0, 3.0, 10.0] {
            assert_close(chi_square_cdf(2, x), 1.0 - (-x / 2.0).exp(), 1e-13);
        }
    }

    #[test]
    fn lambert_known_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert_close(lambert_w0(1.0).unwrap(), 0.567_143_290_409_783_8, 1e-14);
        assert_close(lambert_w0(std::f64::consts::E).unwrap(), 1.0, 1e-14);
        assert_close(lambert_w0(10.0).unwrap(), 1.745_528_002_740_699_4, 1e-13);
        assert_close(lambert_w0(-0.2).unwrap(), -0.259_171_101_819_073_77, 1e-13);
        assert_eq!(lambert_w0(-1.0 / std::f64::consts::E).unwrap(), -1.0);
    }

    #[test]
    fn lambert_rejects_left_of_branch_point() {
        assert!(lambert_w0(-0.368).is_err());
        assert!(lambert_w0(f64::NEG_INFINITY).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn lambert_residual_bound() {
        // Residual contract |w e^w - x| <= 1e-12 max(1, |x|), branch point included.
        let mut x = -1.0 / std::f64::consts::E + 1e-12;
        while x < 1e6 {
            let w = lambert_w0(x).unwrap();
            assert!(
                (w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0),
                "residual too large at x={x}: w={w}"
            );
            x = if x < 0.0 { x / 1.7 + 1e-3 } else { x * 1.7 + 1e-3 };
        }
    }

    #[test]
    fn lambert_round_trip() {
        let mut w_true: f64 = -0.995;
        while w_true <= 3.0 {
            let x = w_true * w_true.exp();
            let w = lambert_w0(x).unwrap();
            assert_close(w, w_true, 1e-8_f64.max(1e-10 * w_true.abs()));
            w_true += 0.037;
        }
    }
}
