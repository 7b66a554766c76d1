//! C ABI over `sympolar`.
//!
//! Bodies are opaque `SpBody` handles created by `sp_body_*` constructors
//! and released with `sp_body_free`. Every call returns an `SpStatus`; on
//! failure `sp_last_error` describes the problem (valid until the next call
//! on the same thread). Strings handed out are freed with `sp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sympolar::capacities::{ehz_bracket, BracketOptions};
use sympolar::convex::json::{body_from_json_str, body_to_json_string};
use sympolar::harness::body_volume;
use sympolar::symplectic::{c_j, self_polarity_certificate, symplectic_polar, symplectic_reduction};
use sympolar::{ConvexBody, Error};

/// Opaque body handle.
pub struct SpBody(ConvexBody);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Degenerate = 4,
    DimensionMismatch = 5,
    OddDimension = 6,
    Precondition = 7,
    Capability = 8,
    Config = 9,
    /// Numerical failure (optimizer, bracketing, refinement, inverted bracket).
    Numeric = 10,
    /// Any other library error.
    Other = 11,
    /// A Rust panic was caught at the boundary.
    Panic = 12,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SpStatus {
    match e {
        Error::Parse(_) => SpStatus::Parse,
        Error::Degenerate(_) | Error::Unbounded(_) | Error::PolarityDomain(_) | Error::ZeroVector => SpStatus::Degenerate,
        Error::DimensionMismatch { .. } => SpStatus::DimensionMismatch,
        Error::OddDimension(_) => SpStatus::OddDimension,
        Error::Precondition(_) | Error::Asymmetric(_) | Error::AlreadySelfPolar(_) => SpStatus::Precondition,
        Error::Capability(_) => SpStatus::Capability,
        Error::Config(_) | Error::InvalidExponent(_) | Error::NotSymplectic(_) => SpStatus::Config,
        Error::NoBracket(_) | Error::Optimizer(_) | Error::Refinement(_) | Error::BracketInversion { .. } => {
            SpStatus::Numeric
        }
        #[allow(unreachable_patterns)]
        _ => SpStatus::Other,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SpStatus>) -> SpStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            SpStatus::Panic
        }
    }
}

fn lib<T>(r: sympolar::Result<T>) -> Result<T, SpStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

fn null() -> SpStatus {
    set_error("null pointer argument");
    SpStatus::NullPointer
}

unsafe fn body_ref<'a>(b: *const SpBody) -> Result<&'a ConvexBody, SpStatus> {
    b.as_ref().map(|b| &b.0).ok_or_else(null)
}

unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), SpStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_body(out: *mut *mut SpBody, body: ConvexBody) -> Result<(), SpStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(SpBody(body))));
    Ok(())
}

/// Message for the last failed call on this thread (empty after success).
#[no_mangle]
pub extern "C" fn sp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a body from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_body_from_json(json: *const c_char, out: *mut *mut SpBody) -> SpStatus {
    guard(|| {
        if json.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(json).to_str().map_err(|e| {
            set_error(&e.to_string());
            SpStatus::InvalidUtf8
        })?;
        emit_body(out, lib(body_from_json_str(s))?)
    })
}

/// Convex hull of `count` points of dimension `dim`, stored row-major.
///
/// # Safety
/// `coords` must hold `count * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_body_from_points(
    coords: *const f64,
    count: usize,
    dim: usize,
    out: *mut *mut SpBody,
) -> SpStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null());
        }
        let flat = std::slice::from_raw_parts(coords, count * dim);
        let points: Vec<Vec<f64>> = flat.chunks(dim.max(1)).map(<[f64]>::to_vec).collect();
        emit_body(out, lib(ConvexBody::float_hull(dim, &points))?)
    })
}

/// Euclidean ball of the given radius.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_body_ball(dim: usize, radius: f64, out: *mut *mut SpBody) -> SpStatus {
    guard(|| {
        if dim == 0 || !(radius > 0.0) || !radius.is_finite() {
            set_error("ball needs dim >= 1 and a positive radius");
            return Err(SpStatus::Config);
        }
        emit_body(out, ConvexBody::ball(dim, radius))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `body` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sp_body_free(body: *mut SpBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// # Safety
/// `body` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_body_dim(body: *const SpBody, out: *mut usize) -> SpStatus {
    guard(|| emit(out, body_ref(body)?.dim()))
}

/// JSON form of a body; free the string with `sp_string_free`.
///
/// # Safety
/// `body` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_body_to_json(body: *const SpBody, out: *mut *mut c_char) -> SpStatus {
    guard(|| {
        let s = body_to_json_string(body_ref(body)?);
        emit(out, CString::new(s).expect("JSON has no NUL").into_raw())
    })
}

/// # Safety
/// `s` must come from this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Symplectic polar `J X°`.
///
/// # Safety
/// `body` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_symplectic_polar(body: *const SpBody, out: *mut *mut SpBody) -> SpStatus {
    guard(|| emit_body(out, lib(symplectic_polar(body_ref(body)?))?))
}

/// Reduction along `v` (length must equal the body dimension).
///
/// # Safety
/// `v` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_symplectic_reduction(
    body: *const SpBody,
    v: *const f64,
    len: usize,
    out: *mut *mut SpBody,
) -> SpStatus {
    guard(|| {
        let x = body_ref(body)?;
        if v.is_null() {
            return Err(null());
        }
        let v = std::slice::from_raw_parts(v, len);
        emit_body(out, lib(symplectic_reduction(x, v))?)
    })
}

/// `c_J` of the body; `certified` is false for sampled estimates.
///
/// # Safety
/// `body` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_c_j(body: *const SpBody, value: *mut f64, certified: *mut bool) -> SpStatus {
    guard(|| {
        let est = lib(c_j(body_ref(body)?))?;
        emit(value, est.value.to_f64())?;
        emit(certified, est.certified)
    })
}

/// Self-polarity residual; `self_polar` is `residual <= tol`.
///
/// # Safety
/// `body` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_self_polarity(
    body: *const SpBody,
    tol: f64,
    residual: *mut f64,
    self_polar: *mut bool,
) -> SpStatus {
    guard(|| {
        let cert = lib(self_polarity_certificate(body_ref(body)?, tol))?;
        let r = cert.residual.to_f64();
        emit(residual, r)?;
        emit(self_polar, r <= tol)
    })
}

/// Volume (exact for polytopes and closed forms, Monte Carlo otherwise).
///
/// # Safety
/// `body` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_volume(body: *const SpBody, seed: u64, out: *mut f64) -> SpStatus {
    guard(|| emit(out, lib(body_volume(body_ref(body)?, seed))?.value.to_f64()))
}

/// Lower and upper bounds on the EHZ capacity.
///
/// # Safety
/// `body` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_ehz_bracket(
    body: *const SpBody,
    chains: usize,
    seed: u64,
    lower: *mut f64,
    upper: *mut f64,
) -> SpStatus {
    guard(|| {
        let opts = BracketOptions { chains, seed, ..BracketOptions::default() };
        let b = lib(ehz_bracket(body_ref(body)?, &opts))?;
        emit(lower, b.lower.to_f64())?;
        emit(upper, b.upper.to_f64())
    })
}

/// Null handle, for C callers that want an explicit initializer.
#[no_mangle]
pub extern "C" fn sp_body_null() -> *mut SpBody {
    ptr::null_mut()
}
