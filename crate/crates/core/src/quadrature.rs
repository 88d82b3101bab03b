//! Adaptive Simpson quadrature used by the independent oracle.

use crate::error::{Error, Result};

/// Default recursion depth bound.
pub const MAX_DEPTH: u32 = 100;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails with [`Error::Convergence`] when a panel still misses its share of
/// the tolerance after `max_depth` bisections.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    step(f, a, b, fa, fm, fb, whole, tol, max_depth, 0)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth_left: u32,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let refined = left + right;
    let delta = refined - whole;
    // rounding floor keeps deep panels from chasing noise
    let budget = tol.max(4.0 * f64::EPSILON * refined.abs());
    if depth >= 4 && delta.abs() <= 15.0 * budget {
        return Ok(refined + delta / 15.0);
    }
    if depth_left == 0 || m <= a || m >= b {
        return Err(Error::Convergence { lo: a, hi: b });
    }
    let l = step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth_left - 1, depth + 1)?;
    let r = step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth_left - 1, depth + 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_gives_log() {
        let v = adaptive_simpson(&|s: f64| 1.0 / s, 1.0, 2.0, 1e-13, MAX_DEPTH).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn square_root_singular_derivative() {
        let v = adaptive_simpson(&|s: f64| s.sqrt(), 0.0, 4.0, 1e-11, MAX_DEPTH).unwrap();
        assert!((v - 16.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn depth_bound_reports_failure() {
        let r = adaptive_simpson(&|s: f64| (1.0 / s).sin(), 1e-6, 1.0, 1e-14, 6);
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }
}
