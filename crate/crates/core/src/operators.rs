//! The operators `Λ_m` and `Λ_m*` on piecewise power functions.
//!
//! `Λ_m f(t) = (1+m) t^{-1-m/2} ∫_0^t f(s) s^{m/2} ds - f(t)` and
//! `Λ_m* f(t) = (1+m) t^{m/2} ∫_t^∞ f(s) s^{-1-m/2} ds - f(t)`.
//! Closed forms go through [`PiecewisePowerFunction::moment_integral`]; the
//! oracle integrates pointwise values with adaptive Simpson instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{PiecewisePowerFunction, PowerPiece, LOG_BRANCH_TOL};
use crate::quadrature::{adaptive_simpson, MAX_DEPTH};
use crate::roots::bisect;

/// Relative slack when deciding `|Tf| ≥ threshold` on plateaus.
pub const PLATEAU_SLACK: f64 = 1e-9;
/// Oracle bisection stops at this bracket width (relative to the endpoint).
pub const CERTIFY_BRACKET: f64 = 1e-10;
/// Largest accepted gap between a closed-form endpoint and its oracle root.
pub const CERTIFY_TOL: f64 = 1e-8;
/// Quadrature tolerance used while certifying endpoints.
const CERTIFY_ORACLE_TOL: f64 = 1e-12;
/// Samples per piece when a crossing has no closed form.
const SCAN_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Lambda,
    LambdaStar,
}

/// An operator together with its dimension parameter `m ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorKind {
    pub kind: Kind,
    m: u32,
}

impl OperatorKind {
    pub fn new(kind: Kind, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("m must be at least 1".into()));
        }
        Ok(Self { kind, m })
    }

    pub fn lambda(m: u32) -> Result<Self> {
        Self::new(Kind::Lambda, m)
    }

    pub fn lambda_star(m: u32) -> Result<Self> {
        Self::new(Kind::LambdaStar, m)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn half(&self) -> f64 {
        self.m as f64 / 2.0
    }

    /// Exponent of `t` in the operator's off-support decay.
    fn decay_exponent(&self) -> f64 {
        match self.kind {
            Kind::Lambda => -1.0 - self.half(),
            Kind::LambdaStar => self.half(),
        }
    }

    /// Weight exponent inside the integral.
    fn weight(&self) -> f64 {
        match self.kind {
            Kind::Lambda => self.half(),
            Kind::LambdaStar => -1.0 - self.half(),
        }
    }

    /// Eigenvalue of `t^alpha`, or a domain error outside the admissible range.
    pub fn eigenvalue(&self, alpha: f64) -> Result<f64> {
        let h = self.half();
        match self.kind {
            Kind::Lambda if alpha > -1.0 - h => Ok((h - alpha) / (1.0 + alpha + h)),
            Kind::LambdaStar if alpha < h => Ok((1.0 + alpha + h) / (h - alpha)),
            Kind::Lambda => Err(Error::Domain(format!("alpha = {alpha} must exceed {}", -1.0 - h))),
            Kind::LambdaStar => Err(Error::Domain(format!("alpha = {alpha} must be below {h}"))),
        }
    }
}

/// Measure and intervals of `{t : |Tf(t)| ≥ threshold}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperlevelResult {
    pub measure: f64,
    pub intervals: Vec<(f64, f64)>,
}

fn check_point(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("evaluation point {t} must be positive and finite")))
    }
}

/// `Tf(t)` from closed-form moments.
pub fn apply_closed_form(op: OperatorKind, f: &PiecewisePowerFunction, t: f64) -> Result<f64> {
    check_point(t)?;
    let m = op.m as f64;
    let integral = match op.kind {
        Kind::Lambda => f.moment_integral(op.weight(), 0.0, t),
        Kind::LambdaStar => f.moment_integral(op.weight(), t, f64::INFINITY),
    };
    Ok((1.0 + m) * t.powf(op.decay_exponent()) * integral - f.value(t))
}

/// `∫_lo^hi f(s) s^w ds` by adaptive Simpson on each piece.
///
/// Only pointwise values of the piece formulas are used, so this is
/// independent of the antiderivatives in [`crate::piecewise`].
pub fn quadrature_moment(f: &PiecewisePowerFunction, w: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let panels: Vec<(PowerPiece, f64, f64)> = f
        .pieces()
        .iter()
        .filter_map(|pc| {
            let x = lo.max(pc.t_lo);
            let y = hi.min(pc.t_hi);
            (x < y).then_some((*pc, x, y))
        })
        .collect();
    let share = tol / panels.len().max(1) as f64;
    let mut total = 0.0;
    for (pc, x, y) in panels {
        let integrand = |s: f64| pc.formula(s) * s.powf(w);
        if !integrand(x).is_finite() {
            return Err(Error::Convergence { lo: x, hi: y });
        }
        total += adaptive_simpson(&integrand, x, y, share, MAX_DEPTH)?;
    }
    Ok(total)
}

/// `Tf(t)` with the integral computed by [`quadrature_moment`].
pub fn apply_quadrature_oracle(op: OperatorKind, f: &PiecewisePowerFunction, t: f64, tol: f64) -> Result<f64> {
    check_point(t)?;
    let m = op.m as f64;
    let scale = (1.0 + m) * t.powf(op.decay_exponent());
    let itol = 0.25 * tol / scale;
    let integral = match op.kind {
        Kind::Lambda => quadrature_moment(f, op.weight(), 0.0, t, itol)?,
        Kind::LambdaStar => quadrature_moment(f, op.weight(), t, f64::INFINITY, itol)?,
    };
    Ok(scale * integral - f.value(t))
}

/// `Tf` on one region written as `a t^q + k0 + k1 t^p`.
#[derive(Debug, Clone, Copy)]
struct RegionForm {
    a: f64,
    q: f64,
    k0: f64,
    k1: f64,
    p: f64,
}

impl RegionForm {
    fn eval(&self, t: f64) -> f64 {
        let mut v = self.k0;
        if self.a != 0.0 {
            v += self.a * t.powf(self.q);
        }
        if self.k1 != 0.0 {
            v += self.k1 * t.powf(self.p);
        }
        v
    }

    /// Collapses to `k + c t^r` when at most one power term is present.
    fn single_power(&self) -> Option<(f64, f64, f64)> {
        let k1_flat = self.k1 == 0.0 || self.p == 0.0;
        let k0 = if self.p == 0.0 { self.k0 + self.k1 } else { self.k0 };
        match (self.a == 0.0, k1_flat) {
            (_, true) => Some((k0, self.a, self.q)),
            (true, false) => Some((k0, self.k1, self.p)),
            (false, false) => None,
        }
    }
}

/// Region of `(0, ∞)` on which `Tf` has a single analytic expression.
#[derive(Debug, Clone, Copy)]
struct Region {
    lo: f64,
    hi: f64,
    /// `None` when the expression contains a log term; evaluation then uses the closed form.
    form: Option<RegionForm>,
}

fn regions(op: OperatorKind, f: &PiecewisePowerFunction) -> Vec<Region> {
    let m = op.m as f64;
    let h = op.half();
    let q = op.decay_exponent();
    let w = op.weight();
    let gap = |lo: f64, hi: f64, mass: f64| Region {
        lo,
        hi,
        form: Some(RegionForm { a: (1.0 + m) * mass, q, k0: 0.0, k1: 0.0, p: 0.0 }),
    };
    let mut out = Vec::new();
    let mut cursor = 0.0;
    for pc in f.pieces() {
        if cursor < pc.t_lo {
            let mass = match op.kind {
                Kind::Lambda => f.moment_integral(w, 0.0, cursor),
                Kind::LambdaStar => f.moment_integral(w, pc.t_lo, f64::INFINITY),
            };
            out.push(gap(cursor, pc.t_lo, mass));
        }
        let form = match op.kind {
            Kind::Lambda => {
                let e1 = pc.p + h + 1.0;
                (e1.abs() >= LOG_BRANCH_TOL).then(|| {
                    let before = f.moment_integral(w, 0.0, pc.t_lo);
                    let a = (1.0 + m)
                        * (before - pc.c0 * pc.t_lo.powf(h + 1.0) / (h + 1.0) - pc.c1 * pc.t_lo.powf(e1) / e1);
                    RegionForm {
                        a,
                        q,
                        k0: pc.c0 * ((1.0 + m) / (1.0 + h) - 1.0),
                        k1: pc.c1 * ((1.0 + m) / e1 - 1.0),
                        p: pc.p,
                    }
                })
            }
            Kind::LambdaStar => {
                let e1 = pc.p - h;
                (e1.abs() >= LOG_BRANCH_TOL).then(|| {
                    let after = f.moment_integral(w, pc.t_hi, f64::INFINITY);
                    let a = (1.0 + m) * (after - pc.c0 * pc.t_hi.powf(-h) / h + pc.c1 * pc.t_hi.powf(e1) / e1);
                    RegionForm { a, q, k0: pc.c0 * ((1.0 + m) / h - 1.0), k1: -pc.c1 * ((1.0 + m) / e1 + 1.0), p: pc.p }
                })
            }
        };
        out.push(Region { lo: pc.t_lo, hi: pc.t_hi, form });
        cursor = pc.t_hi;
    }
    if !f.pieces().is_empty() {
        let mass = match op.kind {
            Kind::Lambda => f.moment_integral(w, 0.0, cursor),
            Kind::LambdaStar => 0.0,
        };
        out.push(gap(cursor, f64::INFINITY, mass));
    }
    out
}

/// A point strictly inside `(lo, hi)`; `hi` may be infinite.
fn interior_point(lo: f64, hi: f64) -> f64 {
    if hi.is_infinite() {
        if lo > 0.0 {
            2.0 * lo
        } else {
            1.0
        }
    } else {
        0.5 * (lo + hi)
    }
}

/// Candidate crossings of `|E| = threshold` strictly inside a region.
fn crossings(op: OperatorKind, f: &PiecewisePowerFunction, region: &Region, threshold: f64) -> Vec<f64> {
    let inside = |t: f64| t.is_finite() && t > region.lo && t < region.hi;
    if let Some((k, c, r)) = region.form.and_then(|fm| fm.single_power()) {
        if c == 0.0 || r == 0.0 {
            return Vec::new();
        }
        return [threshold, -threshold]
            .iter()
            .filter_map(|&level| {
                let ratio = (level - k) / c;
                (ratio > 0.0).then(|| ratio.powf(1.0 / r))
            })
            .filter(|&t| inside(t))
            .collect();
    }
    // three-term or logarithmic expression on a bounded piece: scan and bisect
    let eval = |t: f64| region_value(op, f, region, t).abs() - threshold;
    let (lo, hi) = (region.lo.max(f64::MIN_POSITIVE), region.hi);
    let ratio = (hi / lo).ln();
    let grid: Vec<f64> = (1..SCAN_POINTS)
        .map(|i| {
            let s = i as f64 / SCAN_POINTS as f64;
            if region.lo > 0.0 {
                lo * (s * ratio).exp()
            } else {
                s * hi
            }
        })
        .collect();
    let mut out = Vec::new();
    for pair in grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if eval(a).signum() != eval(b).signum() {
            if let Ok(root) = bisect(eval, a, b, 1e-15 * b) {
                out.push(root);
            }
        }
    }
    out
}

fn region_value(op: OperatorKind, f: &PiecewisePowerFunction, region: &Region, t: f64) -> f64 {
    match region.form {
        Some(form) => form.eval(t),
        None => apply_closed_form(op, f, t).unwrap_or(f64::NAN),
    }
}

/// Measures `{t : |Tf(t)| ≥ threshold}` from closed-form crossings.
///
/// Every endpoint that is a genuine crossing (not a piece boundary) is
/// re-derived by bisection on the quadrature oracle; a gap above
/// [`CERTIFY_TOL`] is reported as [`Error::Certification`].
pub fn superlevel_measure(op: OperatorKind, f: &PiecewisePowerFunction, threshold: f64) -> Result<SuperlevelResult> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Domain(format!("threshold {threshold} must be positive")));
    }
    let accept = threshold * (1.0 - PLATEAU_SLACK);
    let mut segments: Vec<(f64, f64, bool)> = Vec::new();
    for region in regions(op, f) {
        let mut cuts = vec![region.lo];
        let mut inner = crossings(op, f, &region, threshold);
        inner.sort_by(f64::total_cmp);
        cuts.extend(inner);
        cuts.push(region.hi);
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if lo >= hi {
                continue;
            }
            let t = interior_point(lo, hi);
            let keep = region_value(op, f, &region, t).abs() >= accept;
            segments.push((lo, hi, keep));
        }
    }
    let boundaries: Vec<f64> = f.pieces().iter().flat_map(|pc| [pc.t_lo, pc.t_hi]).collect();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for (lo, hi, keep) in segments {
        if !keep {
            continue;
        }
        match intervals.last_mut() {
            Some(last) if last.1 == lo => last.1 = hi,
            _ => intervals.push((lo, hi)),
        }
    }
    for &(lo, hi) in &intervals {
        for end in [lo, hi] {
            if end > 0.0 && end.is_finite() && !boundaries.contains(&end) {
                certify(op, f, end, threshold)?;
            }
        }
    }
    let measure = intervals.iter().map(|(lo, hi)| hi - lo).sum();
    Ok(SuperlevelResult { measure, intervals })
}

fn certify(op: OperatorKind, f: &PiecewisePowerFunction, point: f64, threshold: f64) -> Result<()> {
    let g = |t: f64| apply_quadrature_oracle(op, f, t, CERTIFY_ORACLE_TOL).map_or(f64::NAN, |v| v.abs() - threshold);
    let delta = 1e-6 * point;
    let root = bisect(g, point - delta, point + delta, CERTIFY_BRACKET * point.max(1.0))
        .map_err(|_| Error::Certification { point, oracle: f64::NAN, gap: f64::INFINITY })?;
    let gap = (root - point).abs();
    if gap > CERTIFY_TOL * point.max(1.0) {
        return Err(Error::Certification { point, oracle: root, gap });
    }
    Ok(())
}

/// Largest `|T(t^alpha)(t) - λ t^alpha|` over `t_samples`.
///
/// The power function is truncated to `(0, T]`. For `Λ_m` any `T` above the
/// samples is exact. For `Λ_m*` the tail contributes
/// `(1+m)/(m/2-α) · t^{m/2} T^{α-m/2}`, so `T` is pushed out until that term
/// is below `1e-15` relative to the largest sample.
pub fn eigen_check(op: OperatorKind, alpha: f64, t_samples: &[f64]) -> Result<f64> {
    let lambda = op.eigenvalue(alpha)?;
    let t_max = t_samples.iter().cloned().fold(0.0, f64::max);
    if t_samples.iter().any(|&t| !(t > 0.0 && t.is_finite())) || t_max == 0.0 {
        return Err(Error::Domain("eigen samples must be positive and finite".into()));
    }
    let t_hi = match op.kind {
        Kind::Lambda => 10.0 * t_max,
        Kind::LambdaStar => {
            let gap = op.half() - alpha;
            (t_max * 10f64.powf(15.0 / gap)).clamp(1e3 * t_max, 1e300)
        }
    };
    let f = PiecewisePowerFunction::new(vec![PowerPiece::new(0.0, t_hi, 0.0, 1.0, alpha)?])?;
    let mut worst: f64 = 0.0;
    for &t in t_samples {
        let got = apply_closed_form(op, &f, t)?;
        worst = worst.max((got - lambda * t.powf(alpha)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(t_lo: f64, t_hi: f64, c0: f64, c1: f64, p: f64) -> PiecewisePowerFunction {
        PiecewisePowerFunction::new(vec![PowerPiece::new(t_lo, t_hi, c0, c1, p).unwrap()]).unwrap()
    }

    #[test]
    fn constant_maps_to_one() {
        let f = single(0.0, 10.0, 2.0, 0.0, 0.0);
        let v = apply_closed_form(OperatorKind::lambda(2).unwrap(), &f, 5.0).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kernel_power_vanishes() {
        let f = single(0.0, 10.0, 0.0, 1.0, 1.0);
        let v = apply_closed_form(OperatorKind::lambda(2).unwrap(), &f, 5.0).unwrap();
        assert!(v.abs() < 1e-13);
    }

    #[test]
    fn star_constant_maps_to_one() {
        let m = 3u32;
        let c = m as f64 / (2.0 + m as f64);
        let f = single(0.0, 1e300, c, 0.0, 0.0);
        let v = apply_closed_form(OperatorKind::lambda_star(m).unwrap(), &f, 7.0).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn oracle_constant_integrand() {
        let f = single(0.0, 100.0, 1.0, 0.0, 0.0);
        let op = OperatorKind::lambda(1).unwrap();
        let a = apply_closed_form(op, &f, 50.0).unwrap();
        let b = apply_quadrature_oracle(op, &f, 50.0, 1e-10).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn nonpositive_point_rejected() {
        let f = single(1.0, 2.0, 1.0, 0.0, 0.0);
        assert!(apply_closed_form(OperatorKind::lambda(1).unwrap(), &f, 0.0).is_err());
    }

    #[test]
    fn zero_m_rejected() {
        assert!(OperatorKind::lambda(0).is_err());
    }

    #[test]
    fn superlevel_of_zero_function() {
        let r = superlevel_measure(OperatorKind::lambda(1).unwrap(), &PiecewisePowerFunction::zero(), 1.0).unwrap();
        assert_eq!(r.measure, 0.0);
        assert!(r.intervals.is_empty());
    }

    #[test]
    fn superlevel_of_constant_bump() {
        // f = 3 on (1, 2]: Λ_1 f = 1 - 4 t^{-3/2} inside, 4(2^{3/2}-1) t^{-3/2} after
        let f = single(1.0, 2.0, 3.0, 0.0, 0.0);
        let op = OperatorKind::lambda(1).unwrap();
        let r = superlevel_measure(op, &f, 1.0).unwrap();
        let inner = 2f64.powf(2.0 / 3.0);
        let tail = (4.0 * (2f64.powf(1.5) - 1.0)).powf(2.0 / 3.0);
        assert_eq!(r.intervals.len(), 2);
        assert_eq!(r.intervals[0].0, 1.0);
        assert!((r.intervals[0].1 - inner).abs() < 1e-12);
        assert_eq!(r.intervals[1].0, 2.0);
        assert!((r.intervals[1].1 - tail).abs() < 1e-12);
        assert!((r.measure - (inner - 1.0 + tail - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn superlevel_three_term_piece_matches_oracle() {
        let f = single(1.0, 5.0, 1.0, 0.4, 1.3);
        let op = OperatorKind::lambda(2).unwrap();
        let r = superlevel_measure(op, &f, 0.5).unwrap();
        for &(lo, hi) in &r.intervals {
            let mid = 0.5 * (lo + hi);
            assert!(apply_closed_form(op, &f, mid).unwrap().abs() >= 0.5);
        }
        assert!(r.measure > 0.0);
    }

    #[test]
    fn eigen_examples() {
        let l2 = OperatorKind::lambda(2).unwrap();
        let ts = [0.5, 1.0, 2.0, 3.0];
        assert!((l2.eigenvalue(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(eigen_check(l2, 0.0, &ts).unwrap() < 1e-10);
        assert_eq!(l2.eigenvalue(1.0).unwrap(), 0.0);
        assert!(eigen_check(l2, 1.0, &ts).unwrap() < 1e-10);
        let s1 = OperatorKind::lambda_star(1).unwrap();
        assert_eq!(s1.eigenvalue(-1.5).unwrap(), 0.0);
        assert!(eigen_check(s1, -1.5, &ts).unwrap() < 1e-10);
    }

    #[test]
    fn eigen_domain_errors() {
        assert!(eigen_check(OperatorKind::lambda(2).unwrap(), -2.0, &[1.0]).is_err());
        assert!(eigen_check(OperatorKind::lambda_star(2).unwrap(), 1.0, &[1.0]).is_err());
    }
}
