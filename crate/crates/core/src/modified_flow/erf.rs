//! Gauss error function.

use std::f64::consts::PI;

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// `erf(x) = 2/√π ∫₀ˣ e^{-s²} ds`.
///
/// Positive-term series `e^{-x²} Σ 2ⁿx^{2n+1}/(2n+1)!!` for `|x| ≤ 3`, the
/// Laplace continued fraction for `erfc` beyond, saturating at ±1 for
/// `|x| > 6`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax <= 3.0 {
        series(ax)
    } else if ax <= 6.0 {
        1.0 - erfc_continued_fraction(ax)
    } else {
        1.0
    };
    value.copysign(x)
}

/// Derivative `2/√π e^{-x²}`.
pub fn erf_prime(x: f64) -> f64 {
    TWO_OVER_SQRT_PI * (-x * x).exp()
}

fn series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    TWO_OVER_SQRT_PI * (-x2).exp() * sum
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..200 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_kronrod;

    fn oracle(x: f64) -> f64 {
        TWO_OVER_SQRT_PI * adaptive_kronrod(|s| (-s * s).exp(), 0.0, x, 1e-16)
    }

    #[test]
    fn known_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(1.0) - 0.8427007929497149).abs() < 1e-15);
    }

    #[test]
    fn matches_quadrature_of_definition() {
        let mut x = -6.0;
        while x <= 6.0 {
            let e = erf(x);
            let o = oracle(x);
            assert!((e - o).abs() <= 1e-12 * o.abs().max(1e-300), "x={x}: {e} vs {o}");
            x += 0.137;
        }
    }

    #[test]
    fn branch_join_is_continuous() {
        let below = erf(3.0);
        let above = erf(3.0 + 1e-12);
        assert!((above - below).abs() < 1e-13);
        assert!((erf(3.0) - oracle(3.0)).abs() < 1e-15);
        assert!((erf(3.5) - oracle(3.5)).abs() < 1e-15);
    }

    #[test]
    fn odd_and_saturating() {
        for x in [0.1, 0.7, 2.2, 4.4, 5.9] {
            assert_eq!(erf(-x), -erf(x));
        }
        assert_eq!(erf(7.0), 1.0);
        assert_eq!(erf(f64::INFINITY), 1.0);
        assert_eq!(erf(f64::NEG_INFINITY), -1.0);
    }
}
