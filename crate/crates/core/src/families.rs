//! Extremal two-piece families for `Λ_m` and `Λ_m*` and their feasible domains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{PiecewisePowerFunction, PowerPiece};

/// Relative tolerance used when a caller asks for closure points.
pub const CLOSURE_TOL: f64 = 1e-12;

fn check_m(m: u32) -> Result<f64> {
    if m == 0 {
        Err(Error::Domain("m must be at least 1".into()))
    } else {
        Ok(m as f64)
    }
}

/// `B(a,m) = -2(1+m)/(m a^{m/2})`.
pub fn coeff_b(a: f64, m: u32) -> f64 {
    let m = m as f64;
    -2.0 * (1.0 + m) / (m * a.powf(m / 2.0))
}

/// `D(a,b,c,m)`, chosen so that `Λ_m f = -1` on `(c,d)`.
pub fn coeff_d(a: f64, b: f64, c: f64, m: u32) -> f64 {
    let mf = m as f64;
    let h = mf / 2.0;
    let k = 2.0 * (1.0 + mf) / mf;
    k / c.powf(h) + k / c.powf(h) * (b / c).powf(1.0 + h) + coeff_b(a, m) * (b / c).powf(1.0 + mf)
}

/// `B*(a*,m) = -2(1+m) a*^{1+m/2}/(2+m)`.
pub fn coeff_b_star(a_star: f64, m: u32) -> f64 {
    let m = m as f64;
    -2.0 * (1.0 + m) * a_star.powf(1.0 + m / 2.0) / (2.0 + m)
}

/// `D*(a*,b*,c*,m)`, chosen so that `Λ_m* f* = -1` on `(d*,c*)`.
pub fn coeff_d_star(a_star: f64, b_star: f64, c_star: f64, m: u32) -> f64 {
    let mf = m as f64;
    let h = mf / 2.0;
    let k = 2.0 * (1.0 + mf) / (2.0 + mf);
    k * c_star.powf(1.0 + h) * (1.0 + (c_star / b_star).powf(h))
        + coeff_b_star(a_star, m) * (c_star / b_star).powf(1.0 + mf)
}

/// `D(b,m) = (2(1+m)/m)(2 b^{-m/2} - 1)` of the restricted class.
pub fn spec_d(b: f64, m: u32) -> f64 {
    let m = m as f64;
    2.0 * (1.0 + m) / m * (2.0 * b.powf(-m / 2.0) - 1.0)
}

/// `D*(b*,m) = (2(1+m)/(2+m))(2 b*^{1+m/2} - 1)` of the restricted adjoint class.
pub fn star_spec_d(b_star: f64, m: u32) -> f64 {
    let m = m as f64;
    2.0 * (1.0 + m) / (2.0 + m) * (2.0 * b_star.powf(1.0 + m / 2.0) - 1.0)
}

/// One inequality `lhs < rhs` with its signed slack `rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDiagnostic {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl ConstraintDiagnostic {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self { name: name.to_string(), lhs, rhs, slack: rhs - lhs }
    }

    /// Strict inequality.
    pub fn holds(&self) -> bool {
        self.slack > 0.0
    }

    /// Non-strict inequality up to [`CLOSURE_TOL`].
    pub fn holds_closed(&self) -> bool {
        let scale = self.lhs.abs().max(self.rhs.abs()).max(1.0);
        self.slack >= -CLOSURE_TOL * scale
    }
}

fn first_failure(diags: &[ConstraintDiagnostic], closure: bool) -> Result<()> {
    match diags.iter().find(|d| if closure { !d.holds_closed() } else { !d.holds() }) {
        Some(d) => Err(Error::Constraint(format!("{} (lhs {}, rhs {})", d.name, d.lhs, d.rhs))),
        None => Ok(()),
    }
}

/// Parameters `(m,a,b,c,d)` of the general class with `0 < a < b ≤ c < d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralFamilyParams {
    pub m: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GeneralFamilyParams {
    pub fn new(m: u32, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        check_m(m)?;
        let p = Self { m, a, b, c, d };
        first_failure(&p.validate(), false)?;
        Ok(p)
    }

    pub fn validate(&self) -> Vec<ConstraintDiagnostic> {
        let mut out = vec![
            ConstraintDiagnostic::new("0 < a", 0.0, self.a),
            ConstraintDiagnostic::new("a < b", self.a, self.b),
            ConstraintDiagnostic::new("c < d", self.c, self.d),
        ];
        let mut bc = ConstraintDiagnostic::new("b <= c", self.b, self.c);
        if bc.slack == 0.0 {
            bc.slack = f64::MIN_POSITIVE;
        }
        out.insert(2, bc);
        if !self.d.is_finite() {
            out.push(ConstraintDiagnostic::new("d finite", 1.0, 0.0));
        }
        out
    }

    pub fn coeff_b(&self) -> f64 {
        coeff_b(self.a, self.m)
    }

    pub fn coeff_d(&self) -> f64 {
        coeff_d(self.a, self.b, self.c, self.m)
    }
}

/// Parameters `(m,a*,b*,c*,d*)` of the general adjoint class with `0 < d* < c* ≤ b* < a*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralStarParams {
    pub m: u32,
    pub a_star: f64,
    pub b_star: f64,
    pub c_star: f64,
    pub d_star: f64,
}

impl GeneralStarParams {
    pub fn new(m: u32, a_star: f64, b_star: f64, c_star: f64, d_star: f64) -> Result<Self> {
        check_m(m)?;
        let p = Self { m, a_star, b_star, c_star, d_star };
        first_failure(&p.validate(), false)?;
        Ok(p)
    }

    pub fn validate(&self) -> Vec<ConstraintDiagnostic> {
        let mut cb = ConstraintDiagnostic::new("c* <= b*", self.c_star, self.b_star);
        if cb.slack == 0.0 {
            cb.slack = f64::MIN_POSITIVE;
        }
        vec![
            ConstraintDiagnostic::new("0 < d*", 0.0, self.d_star),
            ConstraintDiagnostic::new("d* < c*", self.d_star, self.c_star),
            cb,
            ConstraintDiagnostic::new("b* < a*", self.b_star, self.a_star),
        ]
    }

    pub fn coeff_b_star(&self) -> f64 {
        coeff_b_star(self.a_star, self.m)
    }

    pub fn coeff_d_star(&self) -> f64 {
        coeff_d_star(self.a_star, self.b_star, self.c_star, self.m)
    }
}

/// A point `(b,d)` of the feasible domain `Ω_m`, or of its closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FSpecParams {
    pub m: u32,
    pub b: f64,
    pub d: f64,
}

impl FSpecParams {
    /// Strictly feasible point.
    pub fn new(m: u32, b: f64, d: f64) -> Result<Self> {
        check_m(m)?;
        first_failure(&validate_spec(m, b, d), false)?;
        Ok(Self { m, b, d })
    }

    /// Point of the closure of `Ω_m`, except the edge `b = b_max`.
    pub fn new_closure(m: u32, b: f64, d: f64) -> Result<Self> {
        check_m(m)?;
        first_failure(&validate_spec(m, b, d), true)?;
        Ok(Self { m, b, d })
    }
}

/// A point `(b*,d*)` of the feasible domain `Ω*_m`, or of its closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FStarSpecParams {
    pub m: u32,
    pub b_star: f64,
    pub d_star: f64,
}

impl FStarSpecParams {
    pub fn new(m: u32, b_star: f64, d_star: f64) -> Result<Self> {
        check_m(m)?;
        first_failure(&validate_star_spec(m, b_star, d_star), false)?;
        Ok(Self { m, b_star, d_star })
    }

    /// Point of the closure of `Ω*_m`, except the edge `b* = b*_min`.
    pub fn new_closure(m: u32, b_star: f64, d_star: f64) -> Result<Self> {
        check_m(m)?;
        first_failure(&validate_star_spec(m, b_star, d_star), true)?;
        Ok(Self { m, b_star, d_star })
    }
}

/// Every inequality defining `Ω_m`: the derived box first, then the raw chain.
pub fn validate_spec(m: u32, b: f64, d: f64) -> Vec<ConstraintDiagnostic> {
    let bd = DomainBoundaries { m };
    let mf = m as f64;
    let h = mf / 2.0;
    let dd = spec_d(b, m);
    let k = (2.0 + mf) / mf;
    vec![
        ConstraintDiagnostic::new("b > b_min", bd.b_min(), b),
        ConstraintDiagnostic::new("b < b_max", b, bd.b_max()),
        ConstraintDiagnostic::new("d > d_min(b)", bd.d_min(b), d),
        ConstraintDiagnostic::new("d < d_max(b)", d, bd.d_max(b)),
        ConstraintDiagnostic::new("D(b,m) > 0", 0.0, dd),
        ConstraintDiagnostic::new("second piece negative at b", -k + dd * b.powf(h), 0.0),
        ConstraintDiagnostic::new("second piece positive at d", 0.0, -k + dd * d.powf(h)),
        ConstraintDiagnostic::new("second piece below 2 at d", -k + dd * d.powf(h), 2.0),
    ]
}

/// Every inequality defining `Ω*_m`.
pub fn validate_star_spec(m: u32, b_star: f64, d_star: f64) -> Vec<ConstraintDiagnostic> {
    let bd = DomainBoundaries { m };
    let mf = m as f64;
    let e = -1.0 - mf / 2.0;
    let dd = star_spec_d(b_star, m);
    let k = mf / (2.0 + mf);
    vec![
        ConstraintDiagnostic::new("b* > b*_min", bd.b_star_min(), b_star),
        ConstraintDiagnostic::new("b* < b*_max", b_star, bd.b_star_max()),
        ConstraintDiagnostic::new("d* > d*_min(b*)", bd.d_star_min(b_star), d_star),
        ConstraintDiagnostic::new("d* < d*_max(b*)", d_star, bd.d_star_max(b_star)),
        ConstraintDiagnostic::new("D*(b*,m) > 0", 0.0, dd),
        ConstraintDiagnostic::new("first piece negative at b*", -k + dd * b_star.powf(e), 0.0),
        ConstraintDiagnostic::new("first piece positive at d*", 0.0, -k + dd * d_star.powf(e)),
        ConstraintDiagnostic::new("first piece below 2 at d*", -k + dd * d_star.powf(e), 2.0),
    ]
}

/// Closed-form boundaries of `Ω_m` and `Ω*_m` for one `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainBoundaries {
    pub m: u32,
}

/// Boundary functions for `m ≥ 1`.
pub fn boundaries(m: u32) -> Result<DomainBoundaries> {
    check_m(m)?;
    Ok(DomainBoundaries { m })
}

impl DomainBoundaries {
    fn mf(&self) -> f64 {
        self.m as f64
    }

    pub fn b_min(&self) -> f64 {
        let m = self.mf();
        ((2.0 + 3.0 * m) / (2.0 + 2.0 * m)).powf(2.0 / m)
    }

    pub fn b_max(&self) -> f64 {
        2f64.powf(2.0 / self.mf())
    }

    fn spec_root(&self, b: f64, numerator: f64) -> f64 {
        let m = self.mf();
        (numerator / (2.0 * (1.0 + m) * (2.0 * b.powf(-m / 2.0) - 1.0))).powf(2.0 / m)
    }

    pub fn d_min(&self, b: f64) -> f64 {
        self.spec_root(b, 2.0 + self.mf())
    }

    pub fn d_max(&self, b: f64) -> f64 {
        self.spec_root(b, 2.0 + 3.0 * self.mf())
    }

    /// Sign change of the second piece; coincides with `d_min`.
    pub fn t0(&self, b: f64) -> f64 {
        self.d_min(b)
    }

    pub fn b_star_min(&self) -> f64 {
        2f64.powf(-2.0 / (2.0 + self.mf()))
    }

    pub fn b_star_max(&self) -> f64 {
        let m = self.mf();
        ((2.0 + 2.0 * m) / (4.0 + 3.0 * m)).powf(2.0 / (2.0 + m))
    }

    fn star_root(&self, b_star: f64, numerator: f64) -> f64 {
        let m = self.mf();
        (numerator / (2.0 * (1.0 + m) * (2.0 * b_star.powf(1.0 + m / 2.0) - 1.0))).powf(-2.0 / (2.0 + m))
    }

    pub fn d_star_min(&self, b_star: f64) -> f64 {
        self.star_root(b_star, 4.0 + 3.0 * self.mf())
    }

    pub fn d_star_max(&self, b_star: f64) -> f64 {
        self.star_root(b_star, self.mf())
    }

    /// Sign change of the first adjoint piece; coincides with `d*_max`.
    pub fn t0_star(&self, b_star: f64) -> f64 {
        self.d_star_max(b_star)
    }

    /// `7^{2/3}` for `m = 1`.
    pub fn b_sp(&self) -> Option<f64> {
        (self.m == 1).then(|| 7f64.powf(2.0 / 3.0))
    }

    /// `(27/(54 - 16(2 - 7^{1/3})^3))^{2/3}` for `m = 1`.
    pub fn b_star_sp(&self) -> Option<f64> {
        (self.m == 1).then(|| (27.0 / (54.0 - 16.0 * (2.0 - 7f64.cbrt()).powi(3))).powf(2.0 / 3.0))
    }

    /// Right end of the `b`-range on which the optimal curve stays feasible.
    pub fn b_tilde_max(&self) -> f64 {
        self.b_sp().unwrap_or_else(|| self.b_max())
    }

    /// Left end of the `b*`-range on which the adjoint optimal curve stays feasible.
    pub fn b_tilde_star_min(&self) -> f64 {
        self.b_star_sp().unwrap_or_else(|| self.b_star_min())
    }
}

fn two_pieces(first: (f64, f64, f64, f64), second: (f64, f64, f64, f64), p: f64) -> Result<PiecewisePowerFunction> {
    PiecewisePowerFunction::new(vec![
        PowerPiece::new(first.0, first.1, first.2, first.3, p)?,
        PowerPiece::new(second.0, second.1, second.2, second.3, p)?,
    ])
}

/// `f = ((2+m)/m + B t^{m/2}) 1_{(a,b]} + (-(2+m)/m + D t^{m/2}) 1_{(c,d]}`.
pub fn build_general(p: &GeneralFamilyParams) -> Result<PiecewisePowerFunction> {
    first_failure(&p.validate(), false)?;
    let m = check_m(p.m)?;
    let k = (2.0 + m) / m;
    two_pieces((p.a, p.b, k, p.coeff_b()), (p.c, p.d, -k, p.coeff_d()), m / 2.0)
}

/// `f* = (-m/(2+m) + D* t^{-1-m/2}) 1_{(d*,c*]} + (m/(2+m) + B* t^{-1-m/2}) 1_{(b*,a*]}`.
pub fn build_general_star(p: &GeneralStarParams) -> Result<PiecewisePowerFunction> {
    first_failure(&p.validate(), false)?;
    let m = check_m(p.m)?;
    let k = m / (2.0 + m);
    two_pieces((p.d_star, p.c_star, -k, p.coeff_d_star()), (p.b_star, p.a_star, k, p.coeff_b_star()), -1.0 - m / 2.0)
}

/// The restricted-class function with `a = 1` and `c = b`.
pub fn build_spec(p: &FSpecParams) -> Result<PiecewisePowerFunction> {
    let m = check_m(p.m)?;
    let k = (2.0 + m) / m;
    two_pieces((1.0, p.b, k, -2.0 * (1.0 + m) / m), (p.b, p.d, -k, spec_d(p.b, p.m)), m / 2.0)
}

/// The restricted adjoint function with `a* = 1` and `c* = b*`.
pub fn build_star_spec(p: &FStarSpecParams) -> Result<PiecewisePowerFunction> {
    let m = check_m(p.m)?;
    let k = m / (2.0 + m);
    two_pieces(
        (p.d_star, p.b_star, -k, star_spec_d(p.b_star, p.m)),
        (p.b_star, 1.0, k, -2.0 * (1.0 + m) / (2.0 + m)),
        -1.0 - m / 2.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{apply_closed_form, OperatorKind};

    #[test]
    fn boundaries_m1() {
        let bd = boundaries(1).unwrap();
        assert!((bd.b_min() - 1.5625).abs() < 1e-15);
        assert!((bd.b_max() - 4.0).abs() < 1e-15);
        assert!((bd.b_star_min() - 2f64.powf(-2.0 / 3.0)).abs() < 1e-15);
        assert!((bd.b_star_max() - (4.0f64 / 7.0).powf(2.0 / 3.0)).abs() < 1e-15);
        let bs = bd.b_star_sp().unwrap();
        assert!((bs - 0.63004).abs() < 1e-5);
        assert!(bd.b_star_min() < bs && bs < bd.b_star_max());
        assert_eq!(bd.b_tilde_max(), 7f64.powf(2.0 / 3.0));
    }

    #[test]
    fn tilde_bounds_for_larger_m() {
        let bd = boundaries(3).unwrap();
        assert_eq!(bd.b_tilde_max(), bd.b_max());
        assert_eq!(bd.b_tilde_star_min(), bd.b_star_min());
        assert!(bd.b_sp().is_none());
    }

    #[test]
    fn d_min_at_b_min_is_b_min() {
        for m in 1..=12 {
            let bd = boundaries(m).unwrap();
            assert!((bd.d_min(bd.b_min()) - bd.b_min()).abs() < 1e-13);
            let b = 0.5 * (bd.b_min() + bd.b_max());
            assert!((bd.d_min(b) - bd.t0(b)).abs() <= 1e-14 * bd.t0(b));
        }
    }

    #[test]
    fn table_point_is_feasible() {
        assert!(validate_spec(1, 2.157, 6.623).iter().all(ConstraintDiagnostic::holds));
        assert!(FSpecParams::new(1, 2.157, 6.623).is_ok());
    }

    #[test]
    fn b_below_b_min_flagged() {
        let diags = validate_spec(1, 1.0, 2.0);
        let bad = diags.iter().find(|d| d.name == "b > b_min").unwrap();
        assert!(!bad.holds());
        assert!(FSpecParams::new(1, 1.0, 2.0).is_err());
    }

    #[test]
    fn d_above_d_max_flagged() {
        let bd = boundaries(2).unwrap();
        let diags = validate_spec(2, 1.566, bd.d_max(1.566) * 1.01);
        assert!(!diags.iter().find(|d| d.name == "d < d_max(b)").unwrap().holds());
        assert!(!diags.iter().find(|d| d.name == "second piece below 2 at d").unwrap().holds());
        assert!(diags.iter().find(|d| d.name == "d > d_min(b)").unwrap().holds());
    }

    #[test]
    fn spec_sign_change_matches_table() {
        let f = build_spec(&FSpecParams::new(1, 2.157, 6.623).unwrap()).unwrap();
        let roots = f.sign_change_points();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 4.29782).abs() < 5e-5);
        let f = build_spec(&FSpecParams::new(2, 1.566, 3.284).unwrap()).unwrap();
        assert!((f.sign_change_points()[0] - 2.40552).abs() < 5e-5);
    }

    #[test]
    fn general_with_a1_b_eq_c_is_spec() {
        let g = build_general(&GeneralFamilyParams::new(1, 1.0, 2.157, 2.157, 6.623).unwrap()).unwrap();
        let s = build_spec(&FSpecParams::new(1, 2.157, 6.623).unwrap()).unwrap();
        for (x, y) in g.pieces().iter().zip(s.pieces()) {
            assert!((x.c0 - y.c0).abs() < 1e-14 && (x.c1 - y.c1).abs() < 1e-13);
        }
        assert_eq!(coeff_b(1.0, 3), -8.0 / 3.0);
    }

    #[test]
    fn general_class_hits_plus_minus_one() {
        let p = GeneralFamilyParams::new(3, 0.7, 1.2, 1.9, 2.6).unwrap();
        let f = build_general(&p).unwrap();
        let op = OperatorKind::lambda(3).unwrap();
        for t in [0.8, 1.0, 1.15] {
            assert!((apply_closed_form(op, &f, t).unwrap() - 1.0).abs() < 1e-9);
        }
        for t in [2.0, 2.3, 2.55] {
            assert!((apply_closed_form(op, &f, t).unwrap() + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn general_star_hits_plus_minus_one() {
        let p = GeneralStarParams::new(2, 1.3, 0.9, 0.6, 0.25).unwrap();
        let f = build_general_star(&p).unwrap();
        let op = OperatorKind::lambda_star(2).unwrap();
        for t in [0.95, 1.1, 1.25] {
            assert!((apply_closed_form(op, &f, t).unwrap() - 1.0).abs() < 1e-9);
        }
        for t in [0.3, 0.45, 0.58] {
            assert!((apply_closed_form(op, &f, t).unwrap() + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn star_table_point() {
        let p = FStarSpecParams::new(1, 0.649, 0.150).unwrap();
        let f = build_star_spec(&p).unwrap();
        let op = OperatorKind::lambda_star(1).unwrap();
        for t in [0.2, 0.4, 0.6] {
            assert!((apply_closed_form(op, &f, t).unwrap() + 1.0).abs() < 1e-9);
        }
        for t in [0.7, 0.85, 0.99] {
            assert!((apply_closed_form(op, &f, t).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn star_midpoint_m3_feasible() {
        let bd = boundaries(3).unwrap();
        let bs = 0.5 * (bd.b_star_min() + bd.b_star_max());
        let ds = 0.5 * (bd.d_star_min(bs) + bd.d_star_max(bs));
        assert!(validate_star_spec(3, bs, ds).iter().all(ConstraintDiagnostic::holds));
    }

    #[test]
    fn second_piece_vanishes_at_b_min() {
        for m in 1..=6 {
            let bd = boundaries(m).unwrap();
            let b = bd.b_min();
            let mf = m as f64;
            let left = -(2.0 + mf) / mf + spec_d(b, m) * b.powf(mf / 2.0);
            assert!(left.abs() < 1e-13);
            let bs = bd.b_star_max();
            let left = -mf / (2.0 + mf) + star_spec_d(bs, m) * bs.powf(-1.0 - mf / 2.0);
            assert!(left.abs() < 1e-13);
        }
    }

    #[test]
    fn closure_admits_boundary() {
        let bd = boundaries(2).unwrap();
        let b = bd.b_min();
        assert!(FSpecParams::new(2, b, bd.d_min(b) * 1.5).is_err());
        assert!(FSpecParams::new_closure(2, b, bd.d_min(b) * 1.5).is_ok());
    }
}
