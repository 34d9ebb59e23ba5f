//! C ABI for the numerical laboratory.
//!
//! Conventions: opaque handles own their Rust objects and are released
//! by the matching `_free`; every fallible call returns a [`ClStatus`]
//! and writes results through out-pointers; the last error message for
//! the calling thread is readable via [`cl_last_error_message`] until
//! the next failing call on that thread.

use carleson_lab::fourier::{partial_sum, PeriodicSignal, SumMethod};
use carleson_lab::kernels::{
    bump_kr, dirichlet_approx_lprime, dirichlet_kernel, kappa, lower_secant_check, DirichletForm,
};
use carleson_lab::space::{BallRef, PointCloudSpace};
use carleson_lab::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Singularity = 3,
    Aliasing = 4,
    ParseError = 5,
    ContractFailed = 6,
    InternalError = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: ClStatus, message: &str) -> ClStatus {
    let cleaned = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).unwrap_or_default();
    });
    status
}

fn fail_err(e: &Error) -> ClStatus {
    let status = match e {
        Error::Domain(_) => ClStatus::InvalidArgument,
        Error::Singularity(_) => ClStatus::Singularity,
        Error::Aliasing { .. } => ClStatus::Aliasing,
        Error::Parse(_) => ClStatus::ParseError,
        Error::Axiom { .. } | Error::Contract(_) => ClStatus::ContractFailed,
        Error::Io(_) => ClStatus::InternalError,
    };
    fail(status, &e.to_string())
}

/// Message of the most recent failure on the calling thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ClStatus> {
    if ptr.is_null() {
        return Err(fail(ClStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(ClStatus::ParseError, "string argument is not UTF-8"))
}

macro_rules! out_write {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            return fail(ClStatus::NullPointer, "null output pointer");
        }
        unsafe { *$ptr = $value };
    }};
}

// ---------------------------------------------------------------------
// stateless kernels

/// Truncated Hilbert kernel κ(x).
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_hilbert_kappa(x: f64, out_re: *mut f64, out_im: *mut f64) -> ClStatus {
    let v = kappa(x);
    out_write!(out_re, v.re);
    out_write!(out_im, v.im);
    ClStatus::Ok
}

/// Dirichlet kernel K_N(x) in the exponential-sum form
/// (`closed_form = false`) or the closed secant form, which fails with
/// `CL_STATUS_SINGULARITY` inside the guard band around e^{ix} = 1.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_dirichlet_kernel(
    n: u32,
    x: f64,
    closed_form: bool,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ClStatus {
    let form = if closed_form {
        DirichletForm::Closed
    } else {
        DirichletForm::Sum
    };
    match dirichlet_kernel(n, x, form) {
        Ok(v) => {
            out_write!(out_re, v.re);
            out_write!(out_im, v.im);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Periodic bump kernel k_r(x) = min(1/r, 1 + r/|1-e^{ix}|²), 0 < r < 1.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_bump_kernel(r: f64, x: f64, out: *mut f64) -> ClStatus {
    match bump_kr(r, x) {
        Ok(v) => {
            out_write!(out, v);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Lower secant bound data: writes |1-e^{ix}| and 2η/π. The first is
/// guaranteed to dominate the second on the admissible range.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_lower_secant_bound(
    eta: f64,
    x: f64,
    out_lhs: *mut f64,
    out_rhs: *mut f64,
) -> ClStatus {
    match lower_secant_check(eta, x) {
        Ok((lhs, rhs)) => {
            out_write!(out_lhs, lhs);
            out_write!(out_rhs, rhs);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Averaged Dirichlet kernel L'(x) for the truncation parameter r.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_dirichlet_approx_lprime(
    r: f64,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ClStatus {
    match dirichlet_approx_lprime(r, x) {
        Ok(v) => {
            out_write!(out_re, v.re);
            out_write!(out_im, v.im);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

// ---------------------------------------------------------------------
// point cloud spaces

/// Opaque finite doubling metric measure space.
pub struct ClSpace(PointCloudSpace);

/// Parse a space from the JSON document
/// `{"points": [...], "metric": "euclidean1d"|"table", "dist": [[...]],
///   "weights": [...], "o": 0, "a": 4}`. The constructor validates the
/// metric and doubling axioms and refuses violating spaces.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_space_from_json(
    json: *const c_char,
    out: *mut *mut ClSpace,
) -> ClStatus {
    if out.is_null() {
        return fail(ClStatus::NullPointer, "null output pointer");
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match PointCloudSpace::from_json(text) {
        Ok(space) => {
            *out = Box::into_raw(Box::new(ClSpace(space)));
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Release a space handle. Null is a no-op.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_space_free(space: *mut ClSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_space_point_count(
    space: *const ClSpace,
    out: *mut usize,
) -> ClStatus {
    let Some(s) = space.as_ref() else {
        return fail(ClStatus::NullPointer, "null space handle");
    };
    out_write!(out, s.0.n());
    ClStatus::Ok
}

/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_space_total_measure(
    space: *const ClSpace,
    out: *mut f64,
) -> ClStatus {
    let Some(s) = space.as_ref() else {
        return fail(ClStatus::NullPointer, "null space handle");
    };
    out_write!(out, s.0.total_measure());
    ClStatus::Ok
}

/// μ of the open ball B(center, radius).
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_space_ball_measure(
    space: *const ClSpace,
    center: usize,
    radius: f64,
    out: *mut f64,
) -> ClStatus {
    let Some(s) = space.as_ref() else {
        return fail(ClStatus::NullPointer, "null space handle");
    };
    match s.0.ball_measure(BallRef::new(center, radius)) {
        Ok(v) => {
            out_write!(out, v);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Global maximal function M(|w|^{p1})^{1/p1} over the generated dyadic
/// ball family. `values` and `out` must hold `len` doubles, with `len`
/// equal to the point count.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_space_global_maximal(
    space: *const ClSpace,
    values: *const f64,
    len: usize,
    p1: f64,
    out: *mut f64,
) -> ClStatus {
    let Some(s) = space.as_ref() else {
        return fail(ClStatus::NullPointer, "null space handle");
    };
    if values.is_null() || out.is_null() {
        return fail(ClStatus::NullPointer, "null buffer");
    }
    if len != s.0.n() {
        return fail(
            ClStatus::InvalidArgument,
            "buffer length must equal the point count",
        );
    }
    let w = std::slice::from_raw_parts(values, len);
    match s.0.global_maximal(w, p1) {
        Ok(m) => {
            std::ptr::copy_nonoverlapping(m.as_ptr(), out, len);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

// ---------------------------------------------------------------------
// periodic signals

/// Opaque 2π-periodic signal.
pub struct ClSignal(PeriodicSignal);

/// Construct a named builtin signal sampled at M points (power of two).
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_signal_builtin(
    name: *const c_char,
    m: usize,
    out: *mut *mut ClSignal,
) -> ClStatus {
    if out.is_null() {
        return fail(ClStatus::NullPointer, "null output pointer");
    }
    let name = match read_str(name) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match PeriodicSignal::builtin(name, m) {
        Ok(sig) => {
            *out = Box::into_raw(Box::new(ClSignal(sig)));
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Parse a signal from
/// `{"kind": "builtin:<name>" | "samples", "M": ..., "values": [...]}`.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_signal_from_json(
    json: *const c_char,
    out: *mut *mut ClSignal,
) -> ClStatus {
    if out.is_null() {
        return fail(ClStatus::NullPointer, "null output pointer");
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match PeriodicSignal::from_json(text) {
        Ok(sig) => {
            *out = Box::into_raw(Box::new(ClSignal(sig)));
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// Release a signal handle. Null is a no-op.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_signal_free(signal: *mut ClSignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_signal_eval(
    signal: *const ClSignal,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ClStatus {
    let Some(s) = signal.as_ref() else {
        return fail(ClStatus::NullPointer, "null signal handle");
    };
    let v = s.0.eval(x);
    out_write!(out_re, v.re);
    out_write!(out_im, v.im);
    ClStatus::Ok
}

/// Fourier coefficient with the anti-aliasing guard |n| ≤ M/4.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_signal_fourier_coeff(
    signal: *const ClSignal,
    n: i64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ClStatus {
    let Some(s) = signal.as_ref() else {
        return fail(ClStatus::NullPointer, "null signal handle");
    };
    match s.0.fourier_coeff(n) {
        Ok(v) => {
            out_write!(out_re, v.re);
            out_write!(out_im, v.im);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}

/// N-th partial Fourier sum at x, by coefficients or by convolution with
/// the Dirichlet kernel.
/// # Safety
/// Pointer arguments must be valid for the access documented above;
/// handles must originate from this library and be live.
#[no_mangle]
pub unsafe extern "C" fn cl_signal_partial_sum(
    signal: *const ClSignal,
    n: u32,
    x: f64,
    convolution: bool,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ClStatus {
    let Some(s) = signal.as_ref() else {
        return fail(ClStatus::NullPointer, "null signal handle");
    };
    let method = if convolution {
        SumMethod::Convolution
    } else {
        SumMethod::Direct
    };
    match partial_sum(&s.0, n, x, method) {
        Ok(v) => {
            out_write!(out_re, v.re);
            out_write!(out_im, v.im);
            ClStatus::Ok
        }
        Err(e) => fail_err(&e),
    }
}
