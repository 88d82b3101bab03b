//! Closed-form ratio functionals: `W`, `W*`, the general-class ratios, and
//! the large-`m` program in the coordinates `(x, y, z)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{boundaries, build_general, build_general_star, GeneralFamilyParams, GeneralStarParams};
use crate::operators::{superlevel_measure, OperatorKind};
use crate::piecewise::PiecewisePowerFunction;

/// Tolerance on the `(x, y)` side constraints of [`asymptotic_restricted`].
const SIDE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    ClosedForm,
    Oracle,
}

/// `|{|Tf| ≥ 1}|` over `‖f‖_1` together with its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub source: Source,
}

impl RatioReport {
    fn new(numerator: f64, denominator: f64, source: Source) -> Result<Self> {
        if !(denominator > 0.0) {
            return Err(Error::NonPositiveDenominator(denominator));
        }
        Ok(Self { numerator, denominator, ratio: numerator / denominator, source })
    }
}

fn positive(den: f64) -> Result<f64> {
    if den > 0.0 && den.is_finite() {
        Ok(den)
    } else {
        Err(Error::NonPositiveDenominator(den))
    }
}

/// `m · 2^{2/(2+m)} / ((2+m)(2 - 2^{2/(2+m)}))`, defined for real `m > 0`.
pub fn gill_bound(m: f64) -> f64 {
    let q = 2f64.powf(2.0 / (2.0 + m));
    m * q / ((2.0 + m) * (2.0 - q))
}

/// `L¹` norm of the first restricted piece on `(1, b]`.
pub fn first_piece_l1(b: f64, m: u32) -> f64 {
    let m = m as f64;
    m / (2.0 + m) - (2.0 + m) / m * b + 4.0 * (1.0 + m) / (m * (2.0 + m)) * b.powf(1.0 + m / 2.0)
}

/// `L¹` norm of the adjoint piece on `(b*, 1]`.
pub fn first_star_piece_l1(b_star: f64, m: u32) -> f64 {
    let m = m as f64;
    -(2.0 + m) / m + m / (2.0 + m) * b_star + 4.0 * (1.0 + m) / (m * (2.0 + m)) * b_star.powf(-m / 2.0)
}

/// Denominator of `W(b,d,m)`, i.e. `‖f‖_1` of the restricted function.
pub fn w_denominator(b: f64, d: f64, m: u32) -> f64 {
    let t0 = boundaries(m).map(|bd| bd.t0(b)).unwrap_or(f64::NAN);
    let mf = m as f64;
    mf / (2.0 + mf) - (2.0 + mf) / mf * d - 2.0 * mf / (2.0 + mf) * b
        + 4.0 * (1.0 + mf) / (mf * (2.0 + mf)) * (2.0 * b.powf(-mf / 2.0) - 1.0) * d.powf(1.0 + mf / 2.0)
        + 2.0 * t0
}

/// Denominator of `W*(b*,d*,m)`.
pub fn w_star_denominator(b_star: f64, d_star: f64, m: u32) -> f64 {
    let t0 = boundaries(m).map(|bd| bd.t0_star(b_star)).unwrap_or(f64::NAN);
    let mf = m as f64;
    -(2.0 + mf) / mf
        + mf / (2.0 + mf) * d_star
        + 2.0 * (2.0 + mf) / mf * b_star
        + 4.0 * (1.0 + mf) / (mf * (2.0 + mf)) * (2.0 * b_star.powf(1.0 + mf / 2.0) - 1.0) * d_star.powf(-mf / 2.0)
        - 2.0 * t0
}

/// `W(b,d,m) = (d - 1) / ‖f‖_1` on the closure of `Ω_m`.
pub fn w(b: f64, d: f64, m: u32) -> Result<f64> {
    boundaries(m)?;
    Ok((d - 1.0) / positive(w_denominator(b, d, m))?)
}

/// `W*(b*,d*,m) = (1 - d*) / ‖f*‖_1` on the closure of `Ω*_m`.
pub fn w_star(b_star: f64, d_star: f64, m: u32) -> Result<f64> {
    boundaries(m)?;
    Ok((1.0 - d_star) / positive(w_star_denominator(b_star, d_star, m))?)
}

/// `∫_lo^hi |-k + D t^e| dt` split at the sign change.
fn abs_power_integral(k: f64, dd: f64, e: f64, lo: f64, hi: f64) -> f64 {
    let prim = |t: f64| -k * t + dd * t.powf(e + 1.0) / (e + 1.0);
    let root = if dd != 0.0 && k / dd > 0.0 { (k / dd).powf(1.0 / e) } else { f64::NAN };
    if root > lo && root < hi {
        (prim(root) - prim(lo)).abs() + (prim(hi) - prim(root)).abs()
    } else {
        (prim(hi) - prim(lo)).abs()
    }
}

/// Corrected left endpoint `b̂` of the general ratio.
pub fn b_hat(b: f64, c: f64, m: u32) -> f64 {
    let mf = m as f64;
    let lead = -1.0 - (2.0 + mf) / mf + 2.0 * (1.0 + mf) / mf * b.powf(mf / 2.0);
    b.max(b * lead.powf(2.0 / (2.0 + mf))).min(c)
}

/// Corrected right endpoint `d̂` of the general ratio.
pub fn d_hat(d: f64, coeff_d: f64, m: u32) -> f64 {
    let mf = m as f64;
    let jump = -1.0 - (2.0 + mf) / mf + coeff_d * d.powf(mf / 2.0);
    d.max(d * jump.abs().powf(2.0 / (2.0 + mf)))
}

/// Closed-form ratio for the general class with `a = 1`.
pub fn general_ratio(p: &GeneralFamilyParams) -> Result<RatioReport> {
    if p.a != 1.0 {
        return Err(Error::Domain(format!("general ratio is normalised to a = 1, got a = {}", p.a)));
    }
    GeneralFamilyParams::new(p.m, p.a, p.b, p.c, p.d)?;
    let mf = p.m as f64;
    let dd = p.coeff_d();
    let numerator = (b_hat(p.b, p.c, p.m) - 1.0) + (d_hat(p.d, dd, p.m) - p.c);
    let denominator = first_piece_l1(p.b, p.m) + abs_power_integral((2.0 + mf) / mf, dd, mf / 2.0, p.c, p.d);
    RatioReport::new(numerator, denominator, Source::ClosedForm)
}

/// Corrected right endpoint `b̂*` of the adjoint general ratio.
pub fn b_star_hat(b_star: f64, c_star: f64, m: u32) -> f64 {
    let mf = m as f64;
    let lead = -1.0 - mf / (2.0 + mf) + 2.0 * (1.0 + mf) / (2.0 + mf) * b_star.powf(-1.0 - mf / 2.0);
    c_star.max((b_star * lead.powf(-2.0 / mf)).min(b_star))
}

/// Corrected left endpoint `d̂*` of the adjoint general ratio.
pub fn d_star_hat(d_star: f64, coeff_d_star: f64, m: u32) -> f64 {
    let mf = m as f64;
    let jump = -1.0 - mf / (2.0 + mf) + coeff_d_star * d_star.powf(-1.0 - mf / 2.0);
    d_star.min(d_star * jump.abs().powf(-2.0 / mf))
}

/// Closed-form ratio for the general adjoint class with `a* = 1`.
pub fn general_ratio_star(p: &GeneralStarParams) -> Result<RatioReport> {
    if p.a_star != 1.0 {
        return Err(Error::Domain(format!("adjoint ratio is normalised to a* = 1, got a* = {}", p.a_star)));
    }
    GeneralStarParams::new(p.m, p.a_star, p.b_star, p.c_star, p.d_star)?;
    let mf = p.m as f64;
    let dd = p.coeff_d_star();
    let numerator = 1.0 - b_star_hat(p.b_star, p.c_star, p.m) + p.c_star - d_star_hat(p.d_star, dd, p.m);
    let denominator = first_star_piece_l1(p.b_star, p.m)
        + abs_power_integral(mf / (2.0 + mf), dd, -1.0 - mf / 2.0, p.d_star, p.c_star);
    RatioReport::new(numerator, denominator, Source::ClosedForm)
}

/// Superlevel measure over `L¹` norm computed by the operators module.
pub fn oracle_ratio(op: OperatorKind, f: &PiecewisePowerFunction) -> Result<RatioReport> {
    let level = superlevel_measure(op, f, 1.0)?;
    RatioReport::new(level.measure, f.l1_norm(), Source::Oracle)
}

/// Oracle ratio of the general class function.
pub fn general_ratio_oracle(p: &GeneralFamilyParams) -> Result<RatioReport> {
    oracle_ratio(OperatorKind::lambda(p.m)?, &build_general(p)?)
}

/// Oracle ratio of the general adjoint class function.
pub fn general_ratio_star_oracle(p: &GeneralStarParams) -> Result<RatioReport> {
    oracle_ratio(OperatorKind::lambda_star(p.m)?, &build_general_star(p)?)
}

/// Large-`m` value of `W` along `b = e^{2x/m}`, `d = e^{2(x+y)/m}`.
pub fn asymptotic_restricted(x: f64, y: f64) -> Result<f64> {
    let (lo, hi) = (1.5f64.ln(), 2f64.ln());
    if !(x >= lo && x < hi) {
        return Err(Error::Constraint(format!("x = {x} must lie in [ln(3/2), ln 2)")));
    }
    let z = 2.0 * (2.0 - x.exp());
    let ze = z * y.exp();
    if !(1.0 - SIDE_TOL..=3.0 + SIDE_TOL).contains(&ze) {
        return Err(Error::Constraint(format!("e^-y <= 2(2-e^x) <= 3e^-y fails: z e^y = {ze}")));
    }
    let den = 2.0 * x.exp() - x - 4.0 - y + z * (y.exp() + 1.0) - 2.0 * z.ln();
    Ok((x + y) / positive(den)?)
}

/// A point `(x, y, z)` with `x, y > 0` and `2(2 - e^x) ≤ z ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AsymptoticPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let z_lo = 2.0 * (2.0 - x.exp());
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::Constraint(format!("x = {x} and y = {y} must be positive")));
        }
        if !(z >= z_lo - SIDE_TOL * z_lo.abs().max(1.0) && z <= 2.0) {
            return Err(Error::Constraint(format!("z = {z} must lie in [{z_lo}, 2]")));
        }
        Ok(Self { x, y, z })
    }
}

/// `x̂(x, z)`.
pub fn x_hat(x: f64, z: f64) -> f64 {
    let a = (2.0 * x.exp() - 2.0).ln();
    x + a.max(0.0).min(a - (2.0 - z).ln())
}

/// `ŷ(y, z)`.
pub fn y_hat(y: f64, z: f64) -> f64 {
    y + (z * y.exp() - 2.0).abs().ln().max(0.0)
}

/// `∫_0^y |-1 + z e^s| ds` in closed form.
pub fn abs_exp_integral(y: f64, z: f64) -> f64 {
    if z >= 1.0 {
        -y + z * (y.exp() - 1.0)
    } else if z <= (-y).exp() {
        y - z * (y.exp() - 1.0)
    } else {
        -2.0 * z.ln() - y + z * (y.exp() + 1.0) - 2.0
    }
}

/// `U = x̂ + ŷ`.
pub fn asymptotic_numerator(p: &AsymptoticPoint) -> f64 {
    x_hat(p.x, p.z) + y_hat(p.y, p.z)
}

/// `V = 2e^x - x - 2 + ∫_0^y |-1 + z e^s| ds`.
pub fn asymptotic_denominator(p: &AsymptoticPoint) -> f64 {
    2.0 * p.x.exp() - p.x - 2.0 + abs_exp_integral(p.y, p.z)
}

/// `U/V` at a point of the standing region.
pub fn asymptotic_general(p: &AsymptoticPoint) -> f64 {
    asymptotic_numerator(p) / asymptotic_denominator(p)
}
