//! C ABI for the `jamesian` crate.
//!
//! Models live behind the opaque `JmModel` handle. Every function returns a
//! `JmStatus`; on failure, `jm_last_error_message` describes the most recent
//! error on the calling thread. Strings handed out by the library must be
//! released with `jm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jamesian::cli::ModelSpec;
use jamesian::verify::{check_conditions, mc_estimate, ConditionList};
use jamesian::{classify_boundary, BoundaryDisposition, Error, ErrorClass, JamesianModel, Prob};

/// Status codes; the numeric values match the CLI exit codes where they
/// overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JmStatus {
    Ok = 0,
    /// bad argument or parameter
    Usage = 1,
    /// outside the model's domain, e.g. an undefined corner
    Domain = 2,
    /// quadrature, inversion, integration or simulation failure
    Numerics = 3,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JmBoundary {
    Interior = 0,
    Forced = 1,
    Undefined = 2,
}

/// Plain-data copy of a Monte Carlo estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JmMcEstimate {
    pub a: f64,
    pub b: f64,
    pub trials: u64,
    pub wins: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
    pub ties_resampled_total: u64,
}

/// Opaque model handle.
pub struct JmModel {
    inner: JamesianModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &Error) -> JmStatus {
    set_error(e.to_string());
    match e.class() {
        ErrorClass::Usage => JmStatus::Usage,
        ErrorClass::Domain => JmStatus::Domain,
        ErrorClass::Numerical => JmStatus::Numerics,
    }
}

fn null(what: &str) -> JmStatus {
    set_error(format!("{what} is NULL"));
    JmStatus::NullPointer
}

/// Runs `f`, turning panics into `JmStatus::Panic`.
fn guard<F: FnOnce() -> JmStatus>(f: F) -> JmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            JmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, JmStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        JmStatus::Usage
    })
}

fn probs(a: f64, b: f64) -> Result<(Prob, Prob), JmStatus> {
    let pa = Prob::new(a).map_err(|e| fail(&e))?;
    let pb = Prob::new(b).map_err(|e| fail(&e))?;
    Ok((pa, pb))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Builds a model from a spec string: `james`, `piecewise`, `logit`,
/// `rational`, `cot`, `probit` or `power:<n>` with `n >= 1`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jm_model_new(spec: *const c_char, out: *mut *mut JmModel) -> JmStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let spec = tri!(read_str(spec, "spec"));
        let model = match spec.parse::<ModelSpec>().and_then(ModelSpec::build) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        *out = Box::into_raw(Box::new(JmModel { inner: model }));
        JmStatus::Ok
    })
}

/// Releases a model. NULL is ignored.
///
/// # Safety
/// `model` must come from `jm_model_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jm_model_free(model: *mut JmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Copy of the model name; release it with `jm_string_free`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jm_model_name(model: *const JmModel, out: *mut *mut c_char) -> JmStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if out.is_null() {
            return null("out");
        }
        let name = (*model).inner.name().replace('\0', " ");
        *out = CString::new(name).expect("NULs removed").into_raw();
        JmStatus::Ok
    })
}

/// `J(a, b)` including the boundary rules.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jm_model_eval(
    model: *const JmModel,
    a: f64,
    b: f64,
    out: *mut f64,
) -> JmStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if out.is_null() {
            return null("out");
        }
        let (pa, pb) = tri!(probs(a, b));
        match (*model).inner.evaluate(pa, pb) {
            Ok(v) => {
                *out = v.value();
                JmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Analytic `(dJ/da, dJ/db)` at an interior point, written to `out[0..2]`.
///
/// # Safety
/// `model` must be a live handle; `out` must point to two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn jm_model_gradient(
    model: *const JmModel,
    a: f64,
    b: f64,
    out: *mut f64,
) -> JmStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if out.is_null() {
            return null("out");
        }
        match (*model).inner.gradient(a, b) {
            Ok([ga, gb]) => {
                *out = ga;
                *out.add(1) = gb;
                JmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Boundary disposition of `(a, b)`. `value` receives the forced value and
/// is left untouched otherwise.
///
/// # Safety
/// `kind` must be writable; `value` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn jm_classify_boundary(
    a: f64,
    b: f64,
    kind: *mut JmBoundary,
    value: *mut f64,
) -> JmStatus {
    guard(|| {
        if kind.is_null() {
            return null("kind");
        }
        let (pa, pb) = tri!(probs(a, b));
        *kind = match classify_boundary(pa, pb) {
            BoundaryDisposition::Interior => JmBoundary::Interior,
            BoundaryDisposition::Undefined => JmBoundary::Undefined,
            BoundaryDisposition::Forced(v) => {
                if !value.is_null() {
                    *value = v.value();
                }
                JmBoundary::Forced
            }
        };
        JmStatus::Ok
    })
}

/// Simulates `trials` Bernoulli-pair contests. Deterministic in `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jm_mc_estimate(
    a: f64,
    b: f64,
    trials: u64,
    seed: u64,
    max_rounds: u64,
    out: *mut JmMcEstimate,
) -> JmStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let (pa, pb) = tri!(probs(a, b));
        match mc_estimate(pa, pb, trials, seed, max_rounds) {
            Ok(e) => {
                *out = JmMcEstimate {
                    a: e.a,
                    b: e.b,
                    trials: e.trials,
                    wins: e.wins,
                    estimate: e.estimate,
                    std_error: e.std_error,
                    seed: e.seed,
                    ties_resampled_total: e.ties_resampled_total,
                };
                JmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

unsafe fn run_check(
    model: *const JmModel,
    list: *const c_char,
    cells: usize,
    tol: f64,
) -> Result<jamesian::verify::ConditionReport, JmStatus> {
    if model.is_null() {
        return Err(null("model"));
    }
    let list: ConditionList = read_str(list, "list")?.parse().map_err(|e| fail(&e))?;
    check_conditions(&(*model).inner, list, cells, tol).map_err(|e| fail(&e))
}

/// Audits the model against `list` (`james`, `proto` or `involutive`) on a
/// grid with `cells` cells per axis. `violations` receives the count; zero
/// means the audit passed.
///
/// # Safety
/// `model` must be a live handle, `list` NUL-terminated, `violations`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn jm_check_conditions(
    model: *const JmModel,
    list: *const c_char,
    cells: usize,
    tol: f64,
    violations: *mut usize,
) -> JmStatus {
    guard(|| {
        if violations.is_null() {
            return null("violations");
        }
        let report = tri!(run_check(model, list, cells, tol));
        *violations = report.violations.len();
        JmStatus::Ok
    })
}

/// Like `jm_check_conditions`, returning the full report as JSON. Free the
/// string with `jm_string_free`.
///
/// # Safety
/// As for `jm_check_conditions`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jm_check_conditions_json(
    model: *const JmModel,
    list: *const c_char,
    cells: usize,
    tol: f64,
    out: *mut *mut c_char,
) -> JmStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let report = tri!(run_check(model, list, cells, tol));
        let json = serde_json::to_string(&report).expect("reports serialize");
        *out = CString::new(json).expect("JSON has no NULs").into_raw();
        JmStatus::Ok
    })
}

/// `n` points of the level curve `J(a, b) = c` with `a` uniform on
/// `[0.001, 0.999]`, written to `a_out[0..n]` and `b_out[0..n]`.
///
/// # Safety
/// `model` must be a live handle; both output arrays must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn jm_level_curve(
    model: *const JmModel,
    c: f64,
    n: usize,
    a_out: *mut f64,
    b_out: *mut f64,
) -> JmStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if a_out.is_null() || b_out.is_null() {
            return null("output array");
        }
        let pc = match Prob::new(c) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        match jamesian::curves::sample_level_curve(&(*model).inner, pc, n) {
            Ok(s) => {
                for (k, (a, b)) in s.points.into_iter().enumerate() {
                    *a_out.add(k) = a;
                    *b_out.add(k) = b;
                }
                JmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn jm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn jm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
