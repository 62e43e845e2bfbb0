//! C ABI for `fracdiff`.
//!
//! Every entry point returns an [`FdStatus`]; results are written through
//! out-pointers. On failure a message is kept per thread and can be copied
//! out with [`fd_last_error_message`] (free it with [`fd_string_free`]).
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fracdiff::density::{u, u_by, u_mode, FractionalParams, Method, Order, QuadratureConfig};
use fracdiff::identities::{nested_lambda, run_identity, SuiteOptions};
use fracdiff::processes::{
    even_moment, max_density_i1, sample_airy_marginal, sample_iterated_terminal, sojourn_density_i1, RngStream,
};
use fracdiff::Error;

/// Status code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    InvalidParams = 1,
    Domain = 2,
    NonConvergent = 3,
    OutOfWindow = 4,
    QuadratureFailure = 5,
    UnsupportedOrder = 6,
    DegenerateInput = 7,
    NullPointer = 8,
    InvalidUtf8 = 9,
    /// An identity check ran but did not pass.
    CheckFailed = 10,
    Panic = 11,
}

/// Representation used for a density value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdMethod {
    Auto = 0,
    Series = 1,
    Integral = 2,
    IntegralByParts = 3,
    ClosedForm = 4,
    Stable = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub method: FdMethod,
}

/// Opaque density handle: `u_ν(·, t)` for fixed `(ν, λ, t)`.
pub struct FdDensity {
    params: FractionalParams,
    quad: QuadratureConfig,
}

/// Opaque random stream handle.
pub struct FdRng {
    rng: RngStream,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> FdStatus {
    match e {
        Error::InvalidParams(_) => FdStatus::InvalidParams,
        Error::Domain(_) => FdStatus::Domain,
        Error::NonConvergent { .. } => FdStatus::NonConvergent,
        Error::OutOfWindow { .. } => FdStatus::OutOfWindow,
        Error::QuadratureFailure { .. } => FdStatus::QuadratureFailure,
        Error::UnsupportedOrder(_) => FdStatus::UnsupportedOrder,
        Error::DegenerateInput(_) => FdStatus::DegenerateInput,
    }
}

enum Fail {
    Lib(Error),
    Status(FdStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Run `f`, translating errors and panics into a status and a stored message.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> FdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            FdStatus::Panic
        }
    }
}

fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: non-null pointers are required to be valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| Fail::Status(FdStatus::NullPointer, format!("{name} is null")))
}

fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    // SAFETY: non-null pointers are required to point to live handles.
    unsafe { p.as_ref() }.ok_or_else(|| Fail::Status(FdStatus::NullPointer, format!("{name} is null")))
}

fn in_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(FdStatus::NullPointer, format!("{name} is null")));
    }
    // SAFETY: non-null strings are required to be NUL-terminated.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail::Status(FdStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn method_to_c(m: Method) -> FdMethod {
    match m {
        Method::Series => FdMethod::Series,
        Method::Integral => FdMethod::Integral,
        Method::IntegralByParts => FdMethod::IntegralByParts,
        Method::ClosedForm => FdMethod::ClosedForm,
        Method::Stable => FdMethod::Stable,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or null if none.
/// Release with [`fd_string_free`].
#[no_mangle]
pub extern "C" fn fd_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_deref() {
        Some(m) => CString::new(m.replace('\0', " ")).map_or(std::ptr::null_mut(), CString::into_raw),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create a density handle. `nu` is a string such as `"2/3"` or `"0.4"`.
///
/// # Safety
/// `nu` must be null or NUL-terminated; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_density_new(nu: *const c_char, lambda: f64, t: f64, out: *mut *mut FdDensity) -> FdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = std::ptr::null_mut();
        let nu: Order = in_str(nu, "nu")?.parse()?;
        let params = FractionalParams::new(nu, lambda, t)?;
        *out = Box::into_raw(Box::new(FdDensity { params, quad: QuadratureConfig::default() }));
        Ok(())
    })
}

/// Release a density handle. Null is ignored.
///
/// # Safety
/// `h` must come from [`fd_density_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fd_density_free(h: *mut FdDensity) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `u_ν(x, t)` with the requested representation (`FD_METHOD_AUTO` picks one).
///
/// # Safety
/// `h` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_density_eval(
    h: *const FdDensity,
    x: f64,
    method: FdMethod,
    out: *mut FdEvalResult,
) -> FdStatus {
    guard(|| {
        let h = in_ref(h, "handle")?;
        let out = out_ref(out, "out")?;
        let r = match method {
            FdMethod::Auto => u(&h.params, x, &h.quad)?,
            FdMethod::Series => u_by(Method::Series, &h.params, x, &h.quad)?,
            FdMethod::Integral => u_by(Method::Integral, &h.params, x, &h.quad)?,
            FdMethod::IntegralByParts => u_by(Method::IntegralByParts, &h.params, x, &h.quad)?,
            FdMethod::ClosedForm => u_by(Method::ClosedForm, &h.params, x, &h.quad)?,
            FdMethod::Stable => u_by(Method::Stable, &h.params, x, &h.quad)?,
        };
        *out = FdEvalResult { value: r.value, abs_err: r.abs_err, method: method_to_c(r.method) };
        Ok(())
    })
}

/// Evaluate on `n` points; `values` and `errors` (optional) receive `n` entries.
///
/// # Safety
/// `xs` must hold `n` values, `values` room for `n`; `errors` is null or room for `n`.
#[no_mangle]
pub unsafe extern "C" fn fd_density_eval_many(
    h: *const FdDensity,
    xs: *const f64,
    n: usize,
    values: *mut f64,
    errors: *mut f64,
) -> FdStatus {
    guard(|| {
        let h = in_ref(h, "handle")?;
        if n == 0 {
            return Ok(());
        }
        in_ref(xs, "xs")?;
        out_ref(values, "values")?;
        let xs = std::slice::from_raw_parts(xs, n);
        let values = std::slice::from_raw_parts_mut(values, n);
        let mut errors = (!errors.is_null()).then(|| std::slice::from_raw_parts_mut(errors, n));
        for (i, &x) in xs.iter().enumerate() {
            let r = u(&h.params, x, &h.quad)?;
            values[i] = r.value;
            if let Some(e) = errors.as_mut() {
                e[i] = r.abs_err;
            }
        }
        Ok(())
    })
}

/// Location of the maximum of `u_ν(·, t)` on `x ≥ 0`.
///
/// # Safety
/// `h` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_density_mode(h: *const FdDensity, out: *mut f64) -> FdStatus {
    guard(|| {
        let h = in_ref(h, "handle")?;
        *out_ref(out, "out")? = u_mode(&h.params, &h.quad)?;
        Ok(())
    })
}

/// Create a random stream. Equal `(seed, stream)` pairs give equal draws.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_rng_new(seed: u64, stream: u64, out: *mut *mut FdRng) -> FdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = Box::into_raw(Box::new(FdRng { rng: RngStream::new(seed, stream) }));
        Ok(())
    })
}

/// Release a random stream. Null is ignored.
///
/// # Safety
/// `h` must come from [`fd_rng_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fd_rng_free(h: *mut FdRng) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// One draw of the `n`-times iterated Brownian motion at time `t`.
///
/// # Safety
/// `h` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_sample_iterated(h: *mut FdRng, n: u32, t: f64, out: *mut f64) -> FdStatus {
    guard(|| {
        let h = out_ref(h, "handle")?;
        *out_ref(out, "out")? = sample_iterated_terminal(n, t, &mut h.rng)?;
        Ok(())
    })
}

/// One draw from `u_{2/3}(·, t)` with diffusivity `lambda`.
///
/// # Safety
/// `h` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_sample_airy(h: *mut FdRng, lambda: f64, t: f64, out: *mut f64) -> FdStatus {
    guard(|| {
        let h = out_ref(h, "handle")?;
        *out_ref(out, "out")? = sample_airy_marginal(lambda, t, &mut h.rng)?;
        Ok(())
    })
}

/// Scale `λ_n` making `u_{1/2^n}` the law of the `n`-times iterated motion.
#[no_mangle]
pub extern "C" fn fd_nested_lambda(n: u32) -> f64 {
    nested_lambda(n)
}

/// `E I_n^{2k}(t)`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_even_moment(n: u32, k: u32, t: f64, out: *mut f64) -> FdStatus {
    guard(|| {
        *out_ref(out, "out")? = even_moment(n, k, t)?;
        Ok(())
    })
}

/// Density of `max_{0≤s≤t} I_1(s)` at `beta ≥ 0`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_max_density(beta: f64, t: f64, out: *mut f64) -> FdStatus {
    guard(|| {
        *out_ref(out, "out")? = max_density_i1(beta, t)?;
        Ok(())
    })
}

/// Density of the time `I_1` spends above zero up to `t`, at `s > 0`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_sojourn_density(s: f64, t: f64, out: *mut f64) -> FdStatus {
    guard(|| {
        *out_ref(out, "out")? = sojourn_density_i1(s, t)?;
        Ok(())
    })
}

/// Run the named identity check (or `"all"`). Returns `FD_STATUS_CHECK_FAILED`
/// when it ran but did not pass; the worst discrepancy goes to `max_discrepancy`
/// if that is non-null.
///
/// # Safety
/// `name` must be null or NUL-terminated; `max_discrepancy` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_verify(name: *const c_char, fast: bool, max_discrepancy: *mut f64) -> FdStatus {
    guard(|| {
        let name = in_str(name, "name")?;
        let opts = SuiteOptions { fast, ..SuiteOptions::default() };
        let reports = run_identity(name, &opts)?;
        if let Some(out) = max_discrepancy.as_mut() {
            *out = reports.iter().map(|r| r.max_abs_discrepancy).fold(0.0, f64::max);
        }
        match reports.iter().find(|r| !r.pass) {
            Some(r) => Err(Fail::Status(
                FdStatus::CheckFailed,
                format!("{} failed: max discrepancy {:e}", r.name, r.max_abs_discrepancy),
            )),
            None => Ok(()),
        }
    })
}
