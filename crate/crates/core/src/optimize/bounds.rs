//! The uniform bound via `(e^{1/m}, e^{3/m})`, the large-`m` push property,
//! and the auxiliary one-variable suprema.

use std::thread;

use serde::{Deserialize, Serialize};

use super::{asymptotic_bound, maximize_w, x_infinity, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use crate::error::{Error, Result};
use crate::families::{boundaries, validate_spec};
use crate::functionals::{asymptotic_general, w, AsymptoticPoint};
use crate::roots::golden_max;

/// Constants `θ`, `K`, `L` and the functions `u0`, `P` of the uniform bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformBoundConstants {
    pub theta: f64,
    pub k: f64,
    pub l: f64,
}

impl Default for UniformBoundConstants {
    fn default() -> Self {
        Self::new()
    }
}

impl UniformBoundConstants {
    pub fn new() -> Self {
        let theta = 2.0 * (-0.5f64).exp() - 1.0;
        Self { theta, k: 4.0 * theta * 1.5f64.exp(), l: -4.0 * (2.0 * theta).ln() }
    }

    /// `u0(m) = 2 ln((2+m)/(2(1+m)θ))`.
    pub fn u0(&self, m: f64) -> f64 {
        2.0 * ((2.0 + m) / (2.0 * (1.0 + m) * self.theta)).ln()
    }

    /// `m ln t_0(e^{1/m}, m)` evaluated through the boundary functions.
    pub fn u0_from_t0(&self, m: u32) -> Result<f64> {
        let bd = boundaries(m)?;
        Ok(m as f64 * bd.t0((1.0 / m as f64).exp()).ln())
    }

    /// The quartic `P(m, M)`.
    pub fn p(&self, m: f64, big_m: f64) -> f64 {
        let (k, l) = (self.k, self.l);
        (2.0 * k + 2.0 * l - 10.0) * m.powi(4)
            + (10.0 * k + 6.0 * l + 2.0 * big_m - 45.0) * m.powi(3)
            + (23.0 * k + 4.0 * l + 6.0 * big_m - 87.0) * m.powi(2)
            + (24.0 * k + 4.0 * big_m - 96.0) * m
            + (9.0 * k - 36.0)
    }

    /// `6m(m+1)(m+3/2)(m+2)/P(m, 3.3)`.
    pub fn rational_bound(&self, m: f64) -> f64 {
        6.0 * m * (m + 1.0) * (m + 1.5) * (m + 2.0) / self.p(m, 3.3)
    }
}

/// One row of the uniform-bound report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound134Row {
    pub m: u32,
    /// Whether `(e^{1/m}, e^{3/m})` lies in `Ω_m`.
    pub pair_feasible: bool,
    /// `W(e^{1/m}, e^{3/m}, m)` when its denominator is positive.
    pub pair_value: Option<f64>,
    /// Value backing the bound: the pair for `m ≥ 4`, a full maximization below.
    pub value: f64,
    pub optimized: bool,
    pub u0: f64,
    /// Present for `m ≥ 25`.
    pub rational_bound: Option<f64>,
}

/// Per-`m` evidence for `W ≥ 1.34` over `m_lo..=m_hi`.
pub fn bound_134(m_lo: u32, m_hi: u32) -> Result<Vec<Bound134Row>> {
    if m_lo == 0 || m_lo > m_hi {
        return Err(Error::Domain(format!("invalid m-range {m_lo}..={m_hi}")));
    }
    let consts = UniformBoundConstants::new();
    (m_lo..=m_hi)
        .map(|m| {
            let mf = m as f64;
            let (b, d) = ((1.0 / mf).exp(), (3.0 / mf).exp());
            let pair_feasible = validate_spec(m, b, d).iter().all(|c| c.holds());
            let pair_value = w(b, d, m).ok();
            let optimized = m <= 3;
            let value = if optimized {
                maximize_w(m, DEFAULT_GRID, DEFAULT_REFINE_TOL)?.value
            } else {
                pair_value.filter(|_| pair_feasible).unwrap_or(f64::NAN)
            };
            Ok(Bound134Row {
                m,
                pair_feasible,
                pair_value,
                value,
                optimized,
                u0: consts.u0(mf),
                rational_bound: (m >= 25).then(|| consts.rational_bound(mf)),
            })
        })
        .collect()
}

/// Outcome of the grid search for points beating the curve supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PushReport {
    pub resolution: usize,
    /// `1/(e^{x_∞} - 1)`.
    pub curve_supremum: f64,
    pub best_value: f64,
    pub best_point: (f64, f64, f64),
    /// `best_value - curve_supremum`; negative when nothing beats the curve.
    pub max_excess: f64,
    /// Positive part of `max_excess`.
    pub violation: f64,
    pub grid_points: usize,
    /// Largest value on the sparse window beyond the caps.
    pub tail_best: f64,
    pub tail_excess: f64,
}

/// Cap on `x` for the dense grid.
pub const PUSH_X_CAP: f64 = 3.0;
/// Cap on `y` for the dense grid.
pub const PUSH_Y_CAP: f64 = 5.0;
/// `z` stays this far below 2.
pub const PUSH_Z_MARGIN: f64 = 1e-9;

fn z_range(x: f64) -> (f64, f64) {
    (2.0 * (2.0 - x.exp()), 2.0 - PUSH_Z_MARGIN)
}

fn slice_best(xs: &[f64], ys: &[f64], zn: usize) -> (f64, (f64, f64, f64), usize) {
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0, 0.0), 0);
    for &x in xs {
        let (z_lo, z_hi) = z_range(x);
        for &y in ys {
            for k in 0..=zn {
                let z = z_lo + (z_hi - z_lo) * k as f64 / zn as f64;
                let Ok(p) = AsymptoticPoint::new(x, y, z) else { continue };
                let v = asymptotic_general(&p);
                best.2 += 1;
                if v > best.0 {
                    best.0 = v;
                    best.1 = (x, y, z);
                }
            }
        }
    }
    best
}

fn parallel_best(xs: &[f64], ys: &[f64], zn: usize) -> (f64, (f64, f64, f64), usize) {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(xs.len().max(1));
    let chunk = xs.len().div_ceil(workers.max(1)).max(1);
    let parts: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = xs.chunks(chunk).map(|c| s.spawn(move || slice_best(c, ys, zn))).collect();
        handles.into_iter().map(|h| h.join().expect("grid worker panicked")).collect()
    });
    // chunks are merged in x order, so ties resolve the same way as a serial pass
    parts.into_iter().fold((f64::NEG_INFINITY, (0.0, 0.0, 0.0), 0), |acc, part| {
        let count = acc.2 + part.2;
        if part.0 > acc.0 {
            (part.0, part.1, count)
        } else {
            (acc.0, acc.1, count)
        }
    })
}

/// Searches the capped region `x ∈ (0, 3]`, `y ∈ (0, 5]`, `z ∈ [2(2-e^x), 2)`
/// for values of `U/V` above `1/(e^{x_∞} - 1)`, plus a sparse window beyond the caps.
///
/// Grids with `n` and `k·n` points per axis are nested.
pub fn push_check(grid_resolution: usize) -> Result<PushReport> {
    if grid_resolution < 16 {
        return Err(Error::Domain(format!("push grid resolution {grid_resolution} is below 16")));
    }
    let n = grid_resolution;
    let sup = asymptotic_bound(x_infinity(1e-13)?);
    let xs: Vec<f64> = (1..=n).map(|i| PUSH_X_CAP * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (1..=n).map(|j| PUSH_Y_CAP * j as f64 / n as f64).collect();
    let (best_value, best_point, grid_points) = parallel_best(&xs, &ys, n);

    let tail_xs: Vec<f64> = (1..=24).map(|i| 0.5 * i as f64).collect();
    let tail_ys: Vec<f64> = (1..=24).map(|j| 40.0 * j as f64 / 24.0).collect();
    let mut tail_best = f64::NEG_INFINITY;
    for &x in &tail_xs {
        for &y in &tail_ys {
            if x <= PUSH_X_CAP && y <= PUSH_Y_CAP {
                continue;
            }
            let (v, _, _) = slice_best(&[x], &[y], 24);
            tail_best = tail_best.max(v);
        }
    }
    let max_excess = best_value - sup;
    Ok(PushReport {
        resolution: n,
        curve_supremum: sup,
        best_value,
        best_point,
        max_excess,
        violation: max_excess.max(0.0),
        grid_points,
        tail_best,
        tail_excess: tail_best - sup,
    })
}

/// Maximum of one auxiliary function over its interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupremumRecord {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub argmax: f64,
    pub value: f64,
    pub bound: f64,
    /// Closed-form supremum when one is known.
    pub exact: Option<f64>,
}

impl SupremumRecord {
    pub fn holds(&self) -> bool {
        self.value <= self.bound
    }
}

const SUP_GRID: usize = 2000;

fn maximize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let grid: Vec<f64> = (0..=SUP_GRID).map(|i| lo + (hi - lo) * i as f64 / SUP_GRID as f64).collect();
    let (mut best, mut best_v) = (0, f64::NEG_INFINITY);
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(SUP_GRID)];
    let (x, v) = golden_max(&f, a, b, 1e-13);
    if v >= best_v {
        (x, v)
    } else {
        (grid[best], best_v)
    }
}

/// The five displayed auxiliary functions, maximized over their intervals.
pub fn auxiliary_suprema() -> Vec<SupremumRecord> {
    let l15 = 1.5f64.ln();
    let l2 = 2f64.ln();
    let open = 1e-9;
    type Aux = (&'static str, f64, f64, f64, Option<f64>, fn(f64) -> f64);
    let items: [Aux; 5] = [
        ("aux-1a", l15, l2, 1.1, None, |y| (y + (2.0 * y.exp() - 2.0).ln()) / (-y + 2.0 * (y.exp() - 1.0))),
        ("aux-1b", open, l15, 1.1, None, |x| {
            let e = x.exp();
            (2.0 * x + 2f64.ln() + (4.0 * (2.0 - e) * e - 2.0).ln())
                / (2.0 * e - 2.0 * x - 2.0 - 2f64.ln() + 2.0 * (2.0 - e) * (2.0 * e - 1.0))
        }),
        ("aux-2", open, l15, 1.18, Some(l15 / (0.75 - l15)), |x| x / (4.0 * x.exp() - (2.0 * x).exp() - x - 3.0)),
        ("aux-3", l15, l2 - open, 1.3, None, |x| {
            let e = x.exp();
            (2.0 * x - (2.0 - e).ln() + (2.0 * e - 2.0).ln()) / (2.0 * e - 2.0 * x - 2.0 * 2f64.ln() - (2.0 - e).ln())
        }),
        ("aux-4", 1.0, 2.0, 1.1, None, |z| {
            let l15 = 1.5f64.ln();
            (2.0 * l15 + (2.0 / z).ln()) / (4.0 - 2.0 * l15 - (2.0 / z).ln() - z)
        }),
    ];
    items
        .iter()
        .map(|&(name, lo, hi, bound, exact, f)| {
            let (argmax, value) = maximize_1d(f, lo, hi);
            SupremumRecord { name: name.to_string(), lo, hi, argmax, value, bound, exact }
        })
        .collect()
}
