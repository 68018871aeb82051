//! C ABI over `adelia`. Objects cross the boundary as opaque handles that the
//! caller releases with the matching `*_free`; every call returns an
//! [`AdeliaStatus`] and leaves a message for [`adelia_last_error`] on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use adelia::cli::config::TaskConfig;
use adelia::cli::run::run_task;
use adelia::field::{parse_ratfn, GaloisField};
use adelia::heis::theta_series;
use adelia::reciprocity::{hilbert_symbol, verify_residue_theorem_curve, QPlace};
use adelia::suite::{run_suite, SuiteOptions};
use adelia::Error;
use num_complex::Complex64;
use num_rational::Rational64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdeliaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Computation = 5,
    Panic = 6,
}

/// A finite field `F_q`.
pub struct AdeliaField {
    inner: GaloisField,
}

/// A finished computation: pass flag plus its JSON serialization.
pub struct AdeliaReport {
    pass: bool,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> AdeliaStatus {
    set_error(&e.to_string());
    match e {
        Error::Parse { .. } => AdeliaStatus::Parse,
        e if e.is_input_error() => AdeliaStatus::Validation,
        _ => AdeliaStatus::Computation,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), AdeliaStatus>) -> AdeliaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AdeliaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            AdeliaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, AdeliaStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(AdeliaStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        AdeliaStatus::InvalidUtf8
    })
}

fn check_out<T>(out: *mut T) -> Result<(), AdeliaStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(AdeliaStatus::NullPointer);
    }
    Ok(())
}

fn report(pass: bool, json: String) -> *mut AdeliaReport {
    let json = CString::new(json).unwrap_or_default();
    Box::into_raw(Box::new(AdeliaReport { pass, json }))
}

/// Message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn adelia_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn adelia_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adelia_field_new(q: u32, out: *mut *mut AdeliaField) -> AdeliaStatus {
    guard(|| {
        check_out(out)?;
        let (p, m) = adelia::cli::config::prime_power(q).map_err(|e| status_of(&e))?;
        let inner = GaloisField::new(p, m).map_err(|e| status_of(&e))?;
        *out = Box::into_raw(Box::new(AdeliaField { inner }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`adelia_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn adelia_field_free(field: *mut AdeliaField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn adelia_field_order(field: *const AdeliaField) -> u32 {
    field.as_ref().map_or(0, |f| f.inner.order())
}

/// Residue theorem for `f dg` on `P^1`, with `f` and `g` rational functions
/// in `x` over `field`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn adelia_residue_curve(
    field: *const AdeliaField,
    f: *const c_char,
    g: *const c_char,
    seed: u64,
    out: *mut *mut AdeliaReport,
) -> AdeliaStatus {
    guard(|| {
        check_out(out)?;
        let k = &field.as_ref().ok_or_else(|| {
            set_error("null field");
            AdeliaStatus::NullPointer
        })?
        .inner;
        let f = parse_ratfn(text(f)?, k).map_err(|e| status_of(&e))?;
        let g = parse_ratfn(text(g)?, k).map_err(|e| status_of(&e))?;
        let r = verify_residue_theorem_curve(&f, &g, None, seed).map_err(|e| status_of(&e))?;
        *out = report(r.pass, r.to_json().to_string());
        Ok(())
    })
}

/// `(a, b)_v` for rationals `a`, `b`; `p = 0` selects the real place.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adelia_hilbert_symbol(
    a_num: i64,
    a_den: i64,
    b_num: i64,
    b_den: i64,
    p: u64,
    out: *mut i8,
) -> AdeliaStatus {
    guard(|| {
        check_out(out)?;
        if a_den == 0 || b_den == 0 {
            set_error("zero denominator");
            return Err(AdeliaStatus::Validation);
        }
        let v = match p {
            0 => QPlace::Infinity,
            p => QPlace::prime(p).map_err(|e| {
                set_error(&e.to_string());
                AdeliaStatus::Validation
            })?,
        };
        let s = hilbert_symbol(Rational64::new(a_num, a_den), Rational64::new(b_num, b_den), v).map_err(|e| status_of(&e))?;
        *out = s;
        Ok(())
    })
}

/// `theta_(p,k,a)(z, lambda)` truncated to `eps`; writes real and imaginary parts.
///
/// # Safety
/// `out_re` and `out_im` must be valid pointers.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn adelia_theta(
    p: i64,
    k: i64,
    a_re: f64,
    a_im: f64,
    z_re: f64,
    z_im: f64,
    lambda_re: f64,
    lambda_im: f64,
    eps: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> AdeliaStatus {
    guard(|| {
        check_out(out_re)?;
        check_out(out_im)?;
        let c = |re, im| Complex64::new(re, im);
        let t = theta_series(p, k, c(a_re, a_im), c(z_re, z_im), c(lambda_re, lambda_im), eps).map_err(|e| status_of(&e))?;
        *out_re = t.re;
        *out_im = t.im;
        Ok(())
    })
}

/// Runs a task given as TOML text, as the `verify` command would.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adelia_run_config(config: *const c_char, out: *mut *mut AdeliaReport) -> AdeliaStatus {
    guard(|| {
        check_out(out)?;
        let cfg = TaskConfig::parse_toml(text(config)?).map_err(|e| status_of(&e))?;
        let env = run_task(&cfg, false).map_err(|e| status_of(&e))?;
        *out = report(env.pass, serde_json::to_string(&env).unwrap_or_default());
        Ok(())
    })
}

/// Runs a named property suite.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adelia_run_suite(name: *const c_char, seed: u64, out: *mut *mut AdeliaReport) -> AdeliaStatus {
    guard(|| {
        check_out(out)?;
        let r = run_suite(text(name)?, &SuiteOptions::with_seed(seed)).map_err(|e| status_of(&e))?;
        *out = report(r.pass, r.to_json().to_string());
        Ok(())
    })
}

/// 1 if every check passed, 0 otherwise or for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn adelia_report_pass(report: *const AdeliaReport) -> i32 {
    report.as_ref().map_or(0, |r| r.pass as i32)
}

/// JSON text owned by the report.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn adelia_report_json(report: *const AdeliaReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn adelia_report_free(report: *mut AdeliaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
