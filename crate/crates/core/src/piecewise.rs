//! Piecewise power functions `c0 + c1 t^p` on half-open intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents closer than this to `-1` use the logarithmic antiderivative.
pub const LOG_BRANCH_TOL: f64 = 1e-13;

/// Relative distance under which a root counts as a piece endpoint.
pub const BOUNDARY_ROOT_TOL: f64 = 1e-12;

/// One piece `c0 + c1 t^p` supported on `(t_lo, t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPiece {
    pub t_lo: f64,
    pub t_hi: f64,
    pub c0: f64,
    pub c1: f64,
    pub p: f64,
}

impl PowerPiece {
    pub fn new(t_lo: f64, t_hi: f64, c0: f64, c1: f64, p: f64) -> Result<Self> {
        if !(t_lo >= 0.0 && t_lo < t_hi && t_hi.is_finite()) {
            return Err(Error::Domain(format!("piece interval ({t_lo}, {t_hi}] is not valid")));
        }
        if !(c0.is_finite() && c1.is_finite() && p.is_finite()) {
            return Err(Error::Domain("piece coefficients must be finite".into()));
        }
        Ok(Self { t_lo, t_hi, c0, c1, p })
    }

    /// True when `t` lies in `(t_lo, t_hi]`.
    pub fn contains(&self, t: f64) -> bool {
        self.t_lo < t && t <= self.t_hi
    }

    /// The power expression itself, ignoring the support.
    pub fn formula(&self, t: f64) -> f64 {
        self.c0 + self.c1 * t.powf(self.p)
    }

    /// `∫_x^y (c0 + c1 s^p) s^w ds` for `[x, y]` inside the piece.
    pub fn weighted_integral(&self, w: f64, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        if self.c0 != 0.0 {
            total += self.c0 * (power_primitive(w, y) - power_primitive(w, x));
        }
        if self.c1 != 0.0 {
            total += self.c1 * (power_primitive(self.p + w, y) - power_primitive(self.p + w, x));
        }
        total
    }

    /// The interior root of the formula, if any.
    pub fn interior_root(&self) -> Option<f64> {
        if self.c1 == 0.0 || self.p == 0.0 {
            return None;
        }
        let ratio = -self.c0 / self.c1;
        if !(ratio > 0.0) {
            return None;
        }
        let root = ratio.powf(1.0 / self.p);
        let near = |edge: f64| (root - edge).abs() <= BOUNDARY_ROOT_TOL * edge.abs().max(root.abs());
        if root > self.t_lo && root < self.t_hi && !near(self.t_lo) && !near(self.t_hi) {
            Some(root)
        } else {
            None
        }
    }
}

/// Antiderivative of `s^e`, with the log branch near `e = -1`.
pub fn power_primitive(e: f64, s: f64) -> f64 {
    if (e + 1.0).abs() < LOG_BRANCH_TOL {
        s.ln()
    } else {
        s.powf(e + 1.0) / (e + 1.0)
    }
}

/// A finite sum of [`PowerPiece`]s on disjoint intervals, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PiecewisePowerFunction {
    pieces: Vec<PowerPiece>,
}

impl PiecewisePowerFunction {
    /// Builds a function from pieces sorted by `t_lo` with disjoint supports.
    pub fn new(pieces: Vec<PowerPiece>) -> Result<Self> {
        for pair in pieces.windows(2) {
            if pair[0].t_hi > pair[1].t_lo {
                return Err(Error::Domain(format!(
                    "pieces ({}, {}] and ({}, {}] overlap or are unsorted",
                    pair[0].t_lo, pair[0].t_hi, pair[1].t_lo, pair[1].t_hi
                )));
            }
        }
        Ok(Self { pieces })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pieces(&self) -> &[PowerPiece] {
        &self.pieces
    }

    /// Smallest interval containing every piece.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.pieces.first()?.t_lo, self.pieces.last()?.t_hi))
    }

    /// Value at `t > 0`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("evaluation point {t} must be positive")));
        }
        Ok(self.value(t))
    }

    /// Value at `t` without the domain check.
    pub fn value(&self, t: f64) -> f64 {
        self.pieces.iter().find(|pc| pc.contains(t)).map_or(0.0, |pc| pc.formula(t))
    }

    /// `∫_lo^hi f(s) s^w ds`; `hi` may be infinite. Empty ranges give 0.
    pub fn moment_integral(&self, w: f64, lo: f64, hi: f64) -> f64 {
        self.pieces
            .iter()
            .filter_map(|pc| {
                let x = lo.max(pc.t_lo);
                let y = hi.min(pc.t_hi);
                (x < y).then(|| pc.weighted_integral(w, x, y))
            })
            .sum()
    }

    /// Exact `∫ |f|`, splitting each piece at its sign change.
    pub fn l1_norm(&self) -> f64 {
        self.pieces
            .iter()
            .map(|pc| match pc.interior_root() {
                Some(r) => pc.weighted_integral(0.0, pc.t_lo, r).abs() + pc.weighted_integral(0.0, r, pc.t_hi).abs(),
                None => pc.weighted_integral(0.0, pc.t_lo, pc.t_hi).abs(),
            })
            .sum()
    }

    /// Interior roots of all pieces, ascending.
    pub fn sign_change_points(&self) -> Vec<f64> {
        self.pieces.iter().filter_map(PowerPiece::interior_root).collect()
    }

    /// The dilation `t ↦ f(t / lambda)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("dilation factor {lambda} must be positive")));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|pc| PowerPiece::new(lambda * pc.t_lo, lambda * pc.t_hi, pc.c0, pc.c1 * lambda.powf(-pc.p), pc.p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(t_lo: f64, t_hi: f64, c0: f64, c1: f64, p: f64) -> PiecewisePowerFunction {
        PiecewisePowerFunction::new(vec![PowerPiece::new(t_lo, t_hi, c0, c1, p).unwrap()]).unwrap()
    }

    #[test]
    fn evaluate_outside_support_is_zero() {
        assert_eq!(single(1.0, 2.0, 3.0, -4.0, 0.5).evaluate(4.0).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_right_after_left_end() {
        let f = single(1.0, 2.157, 3.0, -4.0, 0.5);
        assert!((f.evaluate(1.0 + 1e-12).unwrap() + 1.0).abs() < 1e-10);
        assert_eq!(f.evaluate(1.0).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_includes_right_end() {
        assert_eq!(single(1.0, 4.0, 0.0, 1.0, 0.5).evaluate(4.0).unwrap(), 2.0);
    }

    #[test]
    fn evaluate_rejects_nonpositive() {
        assert!(single(1.0, 4.0, 0.0, 1.0, 0.5).evaluate(0.0).is_err());
    }

    #[test]
    fn moment_of_zero_function() {
        assert_eq!(PiecewisePowerFunction::zero().moment_integral(0.5, 0.0, 3.0), 0.0);
    }

    #[test]
    fn moment_below_support_vanishes() {
        let f = single(1.0, 2.157, 3.0, -4.0, 0.5);
        assert_eq!(f.moment_integral(0.5, 0.0, 1.0), 0.0);
    }

    #[test]
    fn moment_log_branch() {
        let f = single(1.0, 2.0, 1.0, 0.0, 0.0);
        assert!((f.moment_integral(-1.0, 0.0, 5.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn moment_with_infinite_upper_limit() {
        let f = single(1.0, 2.0, 0.0, 1.0, 1.0);
        assert!((f.moment_integral(0.0, 0.0, f64::INFINITY) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn l1_splits_at_sign_change() {
        let d = 2.0;
        let f = single(1.0, 9.0, -3.0, d, 0.5);
        let r = (3.0f64 / d).powi(2);
        assert_eq!(f.sign_change_points(), vec![r]);
        let exact = -f.moment_integral(0.0, 1.0, r) + f.moment_integral(0.0, r, 9.0);
        assert!((f.l1_norm() - exact).abs() < 1e-14);
        assert!(f.l1_norm() > f.moment_integral(0.0, 1.0, 9.0).abs());
    }

    #[test]
    fn sign_changes_exclude_boundary_roots() {
        assert!(single(1.0, 4.0, -1.0, 1.0, 1.0).sign_change_points().is_empty());
        assert!(single(1.0, 4.0, 1.0, 1.0, 1.0).sign_change_points().is_empty());
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let a = PowerPiece::new(1.0, 3.0, 1.0, 0.0, 0.0).unwrap();
        let b = PowerPiece::new(2.0, 4.0, 1.0, 0.0, 0.0).unwrap();
        assert!(PiecewisePowerFunction::new(vec![a, b]).is_err());
    }

    #[test]
    fn dilation_scales_norm() {
        let f = single(1.0, 9.0, -3.0, 2.0, 0.5);
        let g = f.dilate(2.5).unwrap();
        assert!((g.l1_norm() - 2.5 * f.l1_norm()).abs() < 1e-12);
        assert!((g.value(5.0) - f.value(2.0)).abs() < 1e-14);
    }
}
