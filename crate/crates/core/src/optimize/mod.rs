//! Maximization of `W`, the optimal curves `d_opt` and `d*_opt`, the duality
//! map between them, and the large-`m` root `x_∞`.
//!
//! Nothing here draws random numbers.

mod bounds;
pub mod nelder_mead;

pub use bounds::{
    auxiliary_suprema, bound_134, push_check, Bound134Row, PushReport, SupremumRecord, UniformBoundConstants,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{boundaries, DomainBoundaries, CLOSURE_TOL};
use crate::functionals::{w, w_star};
use crate::roots::{bisect, golden_max};
use nelder_mead::{minimize, NelderMeadOptions};

/// Default grid side for [`maximize_w`].
pub const DEFAULT_GRID: usize = 64;
/// Default refinement tolerance for [`maximize_w`].
pub const DEFAULT_REFINE_TOL: f64 = 1e-12;
/// Samples of the coarse scan in [`maximize_on_curve`].
const CURVE_SCAN: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    GridThenNelderMead,
    CurveScan,
}

/// A maximizer of `W(·,·,m)` on the closure of `Ω_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub m: u32,
    pub b: f64,
    pub d: f64,
    pub value: f64,
    pub evaluations: usize,
    pub method: Method,
}

/// Unit-square coordinates `(u, v)` mapped onto `Ω_m`.
fn unit_to_domain(bd: &DomainBoundaries, u: f64, v: f64) -> (f64, f64) {
    let b = bd.b_min() + u * (bd.b_max() - bd.b_min());
    let lo = bd.d_min(b);
    (b, lo + v * (bd.d_max(b) - lo))
}

fn prefer(candidate: (f64, f64, f64), best: Option<(f64, f64, f64)>) -> bool {
    match best {
        None => candidate.2.is_finite(),
        Some((b, d, v)) => candidate.2 > v || (candidate.2 == v && (candidate.0, candidate.1) < (b, d)),
    }
}

/// Grid search over `Ω_m` followed by Nelder–Mead refinement.
///
/// The grid uses `u = i/n` for `i < n` along `b` (so `b = b_max` is never
/// sampled) and `v = j/(n-1)` across `[d_min(b), d_max(b)]`.
pub fn maximize_w(m: u32, grid_resolution: usize, refine_tol: f64) -> Result<OptimumRecord> {
    let bd = boundaries(m)?;
    let n = grid_resolution.max(1);
    let objective = |u: f64, v: f64| {
        let (b, d) = unit_to_domain(&bd, u, v);
        w(b, d, m).unwrap_or(f64::NEG_INFINITY)
    };
    let mut evaluations = 0;
    let mut best: Option<(f64, f64, f64)> = None;
    let mut best_uv = (0.0, 0.0);
    for i in 0..n {
        let u = i as f64 / n as f64;
        for j in 0..n {
            let v = if n == 1 { 0.5 } else { j as f64 / (n - 1) as f64 };
            let (b, d) = unit_to_domain(&bd, u, v);
            let value = objective(u, v);
            evaluations += 1;
            if prefer((b, d, value), best) {
                best = Some((b, d, value));
                best_uv = (u, v);
            }
        }
    }
    let u_cap = 1.0 - 1e-9;
    let step = 1.0 / n as f64;
    let refined = minimize(
        |x: &[f64; 2]| -objective(x[0], x[1]),
        [best_uv.0, best_uv.1],
        [step, step],
        [0.0, 0.0],
        [u_cap, 1.0],
        NelderMeadOptions { f_tol: refine_tol, x_tol: refine_tol.sqrt(), max_iter: 10_000 },
    );
    evaluations += refined.evaluations;
    let (b, d) = unit_to_domain(&bd, refined.x[0], refined.x[1]);
    let candidate = (b, d, -refined.value);
    if prefer(candidate, best) {
        best = Some(candidate);
    }
    let (b, d, value) = best.ok_or_else(|| Error::Domain(format!("no finite value of W on the grid for m = {m}")))?;
    Ok(OptimumRecord { m, b, d, value, evaluations, method: Method::GridThenNelderMead })
}

fn at_least(x: f64, lo: f64) -> bool {
    x >= lo - CLOSURE_TOL * lo.abs().max(1.0)
}

fn at_most(x: f64, hi: f64) -> bool {
    x <= hi + CLOSURE_TOL * hi.abs().max(1.0)
}

/// The `d` maximizing `W(b, ·, m)` along the optimal curve, for `b ∈ [b_min, b_max)`.
pub fn d_opt(b: f64, m: u32) -> Result<f64> {
    let bd = boundaries(m)?;
    if !(at_least(b, bd.b_min()) && b < bd.b_max()) {
        return Err(Error::Domain(format!("b = {b} outside [b_min, b_max) for m = {m}")));
    }
    let mf = m as f64;
    let h = mf / 2.0;
    let k = 2.0 * b.powf(-h) - 1.0;
    let rhs = -mf * k * b.powf(1.0 + h) + 2.0 * (2.0 + mf) * bd.t0(b);
    Ok((rhs / (2.0 * (1.0 + mf) * k)).powf(2.0 / (2.0 + mf)))
}

/// The adjoint optimal curve, for `b* ∈ (b*_min, b*_max]`.
pub fn d_star_opt(b_star: f64, m: u32) -> Result<f64> {
    let bd = boundaries(m)?;
    if !(b_star > bd.b_star_min() && at_most(b_star, bd.b_star_max())) {
        return Err(Error::Domain(format!("b* = {b_star} outside (b*_min, b*_max] for m = {m}")));
    }
    let mf = m as f64;
    let h = mf / 2.0;
    let k = 2.0 * b_star.powf(1.0 + h) - 1.0;
    let rhs = -(2.0 + mf) * k * b_star.powf(-h) + 2.0 * mf * bd.t0_star(b_star);
    if !(rhs > 0.0) {
        return Err(Error::Domain(format!("adjoint curve undefined at b* = {b_star}")));
    }
    Ok((rhs / (2.0 * (1.0 + mf) * k)).powf(-2.0 / mf))
}

/// Image of `b` under the duality map and the residuals of the three identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityRecord {
    pub m: u32,
    pub b: f64,
    pub b_star: f64,
    /// `|t0*(b*) - b/d_opt(b)|`
    pub t0_residual: f64,
    /// `|d*_opt(b*) - 1/d_opt(b)|`
    pub d_opt_residual: f64,
    /// `|W*(b*, d*_opt(b*)) - W(b, d_opt(b))|`
    pub w_residual: f64,
}

impl DualityRecord {
    pub fn worst(&self) -> f64 {
        self.t0_residual.max(self.d_opt_residual).max(self.w_residual)
    }
}

/// `b* = t_0(b)/d_opt(b)` and the residuals of the duality identities.
pub fn duality_map(b: f64, m: u32) -> Result<DualityRecord> {
    let bd = boundaries(m)?;
    let dopt = d_opt(b, m)?;
    let b_star = bd.t0(b) / dopt;
    let dsopt = d_star_opt(b_star, m)?;
    Ok(DualityRecord {
        m,
        b,
        b_star,
        t0_residual: (bd.t0_star(b_star) - b / dopt).abs(),
        d_opt_residual: (dsopt - 1.0 / dopt).abs(),
        w_residual: (w_star(b_star, dsopt, m)? - w(b, dopt, m)?).abs(),
    })
}

/// Upper end of the `b`-range scanned along the optimal curve.
///
/// For `m = 1` this is `b_sp`; otherwise the curve runs off to infinity at
/// `b_max`, which is therefore kept out of the scan.
pub fn curve_upper(m: u32) -> Result<(f64, bool)> {
    let bd = boundaries(m)?;
    Ok((bd.b_tilde_max(), bd.b_sp().is_some()))
}

/// Maximizes `b ↦ W(b, d_opt(b), m)` by a scan and golden-section refinement.
pub fn maximize_on_curve(m: u32) -> Result<OptimumRecord> {
    let bd = boundaries(m)?;
    let (hi, closed) = curve_upper(m)?;
    let lo = bd.b_min();
    let phi = |b: f64| d_opt(b, m).and_then(|d| w(b, d, m)).unwrap_or(f64::NEG_INFINITY);
    let steps = if closed { CURVE_SCAN - 1 } else { CURVE_SCAN };
    let grid: Vec<f64> = (0..CURVE_SCAN).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, &b) in grid.iter().enumerate() {
        let v = phi(b);
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    let left = grid[best.saturating_sub(1)];
    let right = grid.get(best + 1).copied().unwrap_or(grid[best]);
    let (b, value) = golden_max(phi, left, right, 1e-12);
    let (b, value) = if value >= best_value { (b, value) } else { (grid[best], best_value) };
    Ok(OptimumRecord { m, b, d: d_opt(b, m)?, value, evaluations: CURVE_SCAN + 100, method: Method::CurveScan })
}

/// `h(x) = e^x (1 - 2x) - (2 - e^x) ln(2(2 - e^x))`.
pub fn x_infinity_equation(x: f64) -> f64 {
    let r = 2.0 - x.exp();
    x.exp() * (1.0 - 2.0 * x) - r * (2.0 * r).ln()
}

/// Root of [`x_infinity_equation`] in `[ln(3/2), ln 2)`.
pub fn x_infinity(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let lo = 1.5f64.ln();
    let hi = 2f64.ln() - 1e-12;
    let samples = 1000;
    let mut prev = x_infinity_equation(lo);
    for i in 1..=samples {
        let x = lo + (hi - lo) * i as f64 / samples as f64;
        let cur = x_infinity_equation(x);
        if !(cur < prev) {
            return Err(Error::Bracket(format!("h is not decreasing near x = {x}")));
        }
        prev = cur;
    }
    bisect(x_infinity_equation, lo, hi, tol)
}

/// `1/(e^{x_∞} - 1)`, the large-`m` lower bound.
pub fn asymptotic_bound(x_inf: f64) -> f64 {
    1.0 / (x_inf.exp() - 1.0)
}
