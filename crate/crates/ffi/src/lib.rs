//! C ABI over `weakbound`.
//!
//! Functions return a [`WbStatus`] and write results through out-pointers.
//! Functions are opaque [`WbFunction`] handles owned by the caller and released
//! with [`wb_function_free`]. After a failure, [`wb_last_error_message`] copies
//! the message of the most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use weakbound::families::{
    build_general, build_general_star, build_spec, build_star_spec, FSpecParams, FStarSpecParams, GeneralFamilyParams,
    GeneralStarParams,
};
use weakbound::operators::{apply_closed_form, superlevel_measure, OperatorKind};
use weakbound::optimize::{d_opt, d_star_opt, maximize_w, x_infinity, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use weakbound::piecewise::PiecewisePowerFunction;
use weakbound::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WbStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Constraint = 3,
    NonPositiveDenominator = 4,
    Convergence = 5,
    Bracket = 6,
    Certification = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WbOperator {
    Lambda = 0,
    LambdaStar = 1,
}

/// Opaque piecewise power function.
pub struct WbFunction {
    inner: PiecewisePowerFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> WbStatus {
    match e {
        Error::Domain(_) | Error::UnknownSuite(_) => WbStatus::Domain,
        Error::Constraint(_) => WbStatus::Constraint,
        Error::NonPositiveDenominator(_) => WbStatus::NonPositiveDenominator,
        Error::Convergence { .. } => WbStatus::Convergence,
        Error::Bracket(_) => WbStatus::Bracket,
        Error::Certification { .. } => WbStatus::Certification,
    }
}

fn fail(status: WbStatus, msg: impl Into<String>) -> WbStatus {
    set_error(msg.into());
    status
}

fn guard(body: impl FnOnce() -> Result<(), WbStatus>) -> WbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WbStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(WbStatus::Panic, "panic inside weakbound"),
    }
}

fn lift<T>(r: weakbound::Result<T>) -> Result<T, WbStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, WbStatus> {
    // SAFETY: callers promise `p` is null or valid for writes
    unsafe { p.as_mut() }.ok_or_else(|| fail(WbStatus::NullPointer, "null output pointer"))
}

fn function_ref<'a>(f: *const WbFunction) -> Result<&'a WbFunction, WbStatus> {
    // SAFETY: callers promise `f` is null or a live handle
    unsafe { f.as_ref() }.ok_or_else(|| fail(WbStatus::NullPointer, "null function handle"))
}

fn operator(op: WbOperator, m: u32) -> Result<OperatorKind, WbStatus> {
    lift(match op {
        WbOperator::Lambda => OperatorKind::lambda(m),
        WbOperator::LambdaStar => OperatorKind::lambda_star(m),
    })
}

fn emit_handle(out: *mut *mut WbFunction, f: weakbound::Result<PiecewisePowerFunction>) -> WbStatus {
    guard(|| {
        let slot = out_ref(out)?;
        let inner = lift(f)?;
        *slot = Box::into_raw(Box::new(WbFunction { inner }));
        Ok(())
    })
}

fn emit_value(out: *mut f64, f: impl FnOnce() -> weakbound::Result<f64>) -> WbStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = lift(f())?;
        Ok(())
    })
}

/// Builds the restricted function with parameters `(b, d)`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_function_spec(m: u32, b: f64, d: f64, out: *mut *mut WbFunction) -> WbStatus {
    emit_handle(out, FSpecParams::new(m, b, d).and_then(|p| build_spec(&p)))
}

/// Builds the restricted adjoint function with parameters `(b*, d*)`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_function_star_spec(
    m: u32,
    b_star: f64,
    d_star: f64,
    out: *mut *mut WbFunction,
) -> WbStatus {
    emit_handle(out, FStarSpecParams::new(m, b_star, d_star).and_then(|p| build_star_spec(&p)))
}

/// Builds the general four-parameter function, `a < b <= c < d`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_function_general(
    m: u32,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    out: *mut *mut WbFunction,
) -> WbStatus {
    emit_handle(out, GeneralFamilyParams::new(m, a, b, c, d).and_then(|p| build_general(&p)))
}

/// Builds the general adjoint function, `a* > b* >= c* > d*`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_function_general_star(
    m: u32,
    a_star: f64,
    b_star: f64,
    c_star: f64,
    d_star: f64,
    out: *mut *mut WbFunction,
) -> WbStatus {
    emit_handle(out, GeneralStarParams::new(m, a_star, b_star, c_star, d_star).and_then(|p| build_general_star(&p)))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle returned by this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn wb_function_free(f: *mut WbFunction) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Evaluates `f(t)` for `t > 0`.
///
/// # Safety
/// `f` must be null or a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_function_evaluate(f: *const WbFunction, t: f64, out: *mut f64) -> WbStatus {
    guard(|| {
        let f = function_ref(f)?;
        *out_ref(out)? = lift(f.inner.evaluate(t))?;
        Ok(())
    })
}

/// Writes the L¹ norm of `f`.
///
/// # Safety
/// `f` must be null or a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_function_l1_norm(f: *const WbFunction, out: *mut f64) -> WbStatus {
    guard(|| {
        let f = function_ref(f)?;
        *out_ref(out)? = f.inner.l1_norm();
        Ok(())
    })
}

/// Applies the operator to `f` at `t` in closed form.
///
/// # Safety
/// `op` must be a declared [`WbOperator`] value; `f` must be null or a live
/// handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_apply_operator(
    op: WbOperator,
    m: u32,
    f: *const WbFunction,
    t: f64,
    out: *mut f64,
) -> WbStatus {
    guard(|| {
        let f = function_ref(f)?;
        let op = operator(op, m)?;
        *out_ref(out)? = lift(apply_closed_form(op, &f.inner, t))?;
        Ok(())
    })
}

/// Lebesgue measure of `{t > 0 : op f(t) >= threshold}`.
///
/// # Safety
/// `op` must be a declared [`WbOperator`] value; `f` must be null or a live
/// handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_superlevel_measure(
    op: WbOperator,
    m: u32,
    f: *const WbFunction,
    threshold: f64,
    out: *mut f64,
) -> WbStatus {
    guard(|| {
        let f = function_ref(f)?;
        let op = operator(op, m)?;
        *out_ref(out)? = lift(superlevel_measure(op, &f.inner, threshold))?.measure;
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_w(b: f64, d: f64, m: u32, out: *mut f64) -> WbStatus {
    emit_value(out, || weakbound::functionals::w(b, d, m))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_w_star(b_star: f64, d_star: f64, m: u32, out: *mut f64) -> WbStatus {
    emit_value(out, || weakbound::functionals::w_star(b_star, d_star, m))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_d_opt(b: f64, m: u32, out: *mut f64) -> WbStatus {
    emit_value(out, || d_opt(b, m))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_d_star_opt(b_star: f64, m: u32, out: *mut f64) -> WbStatus {
    emit_value(out, || d_star_opt(b_star, m))
}

/// Maximizes `W(·, ·, m)` with the default grid and refinement.
///
/// # Safety
/// `b`, `d` and `value` must each be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_maximize_w(m: u32, b: *mut f64, d: *mut f64, value: *mut f64) -> WbStatus {
    guard(|| {
        let (b, d, value) = (out_ref(b)?, out_ref(d)?, out_ref(value)?);
        let r = lift(maximize_w(m, DEFAULT_GRID, DEFAULT_REFINE_TOL))?;
        (*b, *d, *value) = (r.b, r.d, r.value);
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wb_x_infinity(tol: f64, out: *mut f64) -> WbStatus {
    emit_value(out, || x_infinity(tol))
}

#[no_mangle]
pub extern "C" fn wb_gill_bound(m: f64) -> f64 {
    weakbound::functionals::gill_bound(m)
}

/// Copies the last error message of this thread, NUL-terminated and truncated
/// to `len` bytes. Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for writing `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn wb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: `buf` holds at least `len > n` bytes
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}
