//! Sign-change bracketing and bisection.

use crate::error::{KuoError, Result};

/// Bisection for a root of `f` in `[a, b]` given `f(a)` and `f(b)` of opposite
/// sign. Stops once `|f(x)| <= ftol` or the bracket is narrower than `xtol`.
pub fn bisect<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, ftol: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(KuoError::BracketFailure(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let (mut lo, mut hi, mut flo) = (a, b, fa);
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm.abs() <= ftol || (hi - lo).abs() <= xtol {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, -2.0, 2.0, 1e-14, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_same_sign() {
        let r = bisect(|x| Ok(x * x + 1.0), 0.0, 2.0, 1.0, 5.0, 1e-12, 1e-12);
        assert!(matches!(r, Err(KuoError::BracketFailure(_))));
    }
}
