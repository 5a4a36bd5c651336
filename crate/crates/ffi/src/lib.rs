//! C ABI for `oplab`.
//!
//! Matrices cross the boundary as opaque [`OplabMatrix`] handles built from
//! interleaved row-major `(re, im)` doubles. Every fallible function returns
//! an [`OplabStatus`]; on failure [`oplab_last_error`] describes the cause.
//! Library panics are caught and reported as `OPLAB_STATUS_PANIC`.
//!
//! All numerical entry points use the default tolerance profile except
//! [`oplab_run_check_json`], whose configuration carries its own.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use oplab::campaign::{run_check, run_counterexample, run_fuzz, CampaignConfig};
use oplab::inequalities::{
    halmos_reid_margin, kittaneh_margin, monotonicity_cert, reid_margin, Enforcement, MonotoneKind,
};
use oplab::{Complex, ComplexMatrix, Error, HypothesisMode, Margin, PowerExponent, ToleranceProfile, Vector};

/// Opaque matrix handle. Free with [`oplab_matrix_free`].
pub struct OplabMatrix(ComplexMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OplabStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    Hypothesis = 3,
    Numerical = 4,
    InvalidArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OplabMode {
    Classic = 0,
    Normal = 1,
    CoHyponormal = 2,
    None = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OplabMonotone {
    Sqrt = 0,
    Inverse = 1,
    Square = 2,
    Power = 3,
}

/// Both sides of `lhs <= rhs`, with `margin = rhs - lhs`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OplabMargin {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// 1 when every hypothesis held, 0 when the margin was force-evaluated.
    pub hypotheses_hold: c_int,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OplabStatus {
    match e {
        Error::Dimension { .. } => OplabStatus::DimensionMismatch,
        Error::Hypothesis { .. } => OplabStatus::Hypothesis,
        Error::Numerical(_) => OplabStatus::Numerical,
        _ => OplabStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), OplabError>) -> OplabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OplabStatus::Ok,
        Ok(Err(OplabError::Null(what))) => {
            set_last_error(format!("null pointer passed as {what}"));
            OplabStatus::NullPointer
        }
        Ok(Err(OplabError::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            OplabStatus::Panic
        }
    }
}

enum OplabError {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for OplabError {
    fn from(e: Error) -> Self {
        OplabError::Lib(e)
    }
}

unsafe fn matrix_ref<'a>(m: *const OplabMatrix, what: &'static str) -> Result<&'a ComplexMatrix, OplabError> {
    m.as_ref().map(|h| &h.0).ok_or(OplabError::Null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, OplabError> {
    p.as_mut().ok_or(OplabError::Null(what))
}

unsafe fn complex_slice(data: *const f64, len: usize, what: &'static str) -> Result<Vec<Complex>, OplabError> {
    if data.is_null() {
        return Err(OplabError::Null(what));
    }
    let raw = std::slice::from_raw_parts(data, 2 * len);
    Ok(raw.chunks_exact(2).map(|c| Complex::new(c[0], c[1])).collect())
}

fn store(out: &mut *mut OplabMatrix, m: ComplexMatrix) {
    *out = Box::into_raw(Box::new(OplabMatrix(m)));
}

fn c_margin(m: &Margin, hold: bool) -> OplabMargin {
    OplabMargin {
        lhs: m.lhs,
        rhs: m.rhs,
        margin: m.margin,
        hypotheses_hold: hold as c_int,
    }
}

fn mode_of(mode: OplabMode) -> HypothesisMode {
    match mode {
        OplabMode::Classic => HypothesisMode::Classic,
        OplabMode::Normal => HypothesisMode::Normal,
        OplabMode::CoHyponormal => HypothesisMode::CoHyponormal,
        OplabMode::None => HypothesisMode::None,
    }
}

fn enforcement(force: c_int) -> Enforcement {
    if force != 0 {
        Enforcement::Force
    } else {
        Enforcement::Strict
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oplab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a `dim x dim` matrix from `2 * dim * dim` interleaved row-major doubles.
///
/// # Safety
/// `data` must point to `2 * dim * dim` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_matrix_new(dim: usize, data: *const f64, out: *mut *mut OplabMatrix) -> OplabStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let len = dim.checked_mul(dim).ok_or(Error::InvalidArgument("dimension overflows".into()))?;
        let entries = complex_slice(data, len, "data")?;
        store(out, ComplexMatrix::from_row_major(dim, entries)?);
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle returned by this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oplab_matrix_free(m: *mut OplabMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of `m`, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oplab_matrix_dim(m: *const OplabMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.0.dim())
}

/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_matrix_get(
    m: *const OplabMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> OplabStatus {
    guard(|| {
        let m = matrix_ref(m, "m")?;
        let (re, im) = (out_ref(re, "re")?, out_ref(im, "im")?);
        if row >= m.dim() || col >= m.dim() {
            return Err(Error::InvalidArgument(format!("index ({row}, {col}) out of range for dimension {}", m.dim())).into());
        }
        let z = m[(row, col)];
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Copies the entries of `m` as interleaved row-major doubles; `len` must be `2 * dim * dim`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn oplab_matrix_copy_data(m: *const OplabMatrix, out: *mut f64, len: usize) -> OplabStatus {
    guard(|| {
        let m = matrix_ref(m, "m")?;
        if out.is_null() {
            return Err(OplabError::Null("out"));
        }
        let need = 2 * m.dim() * m.dim();
        if len != need {
            return Err(Error::Dimension {
                context: "oplab_matrix_copy_data buffer",
                expected: need,
                actual: len,
            }
            .into());
        }
        let buf = std::slice::from_raw_parts_mut(out, len);
        for (pair, z) in buf.chunks_exact_mut(2).zip(m.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_operator_norm(m: *const OplabMatrix, out: *mut f64) -> OplabStatus {
    guard(|| {
        *out_ref(out, "out")? = oplab::spectra::operator_norm(matrix_ref(m, "m")?);
        Ok(())
    })
}

/// Spectral radius by the Gelfand formula.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_spectral_radius(m: *const OplabMatrix, out: *mut f64) -> OplabStatus {
    guard(|| {
        let trace = oplab::spectra::spectral_radius_gelfand(matrix_ref(m, "m")?, &ToleranceProfile::default());
        *out_ref(out, "out")? = trace.radius;
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` writable. The result must be freed.
#[no_mangle]
pub unsafe extern "C" fn oplab_sqrt_psd(m: *const OplabMatrix, out: *mut *mut OplabMatrix) -> OplabStatus {
    guard(|| {
        let r = oplab::matfun::sqrt_psd(matrix_ref(m, "m")?, &ToleranceProfile::default())?;
        store(out_ref(out, "out")?, r);
        Ok(())
    })
}

/// `|T| = (T*T)^(1/2)`.
///
/// # Safety
/// `m` must be a live handle and `out` writable. The result must be freed.
#[no_mangle]
pub unsafe extern "C" fn oplab_abs_value(m: *const OplabMatrix, out: *mut *mut OplabMatrix) -> OplabStatus {
    guard(|| {
        let r = oplab::matfun::abs_value(matrix_ref(m, "m")?, &ToleranceProfile::default())?;
        store(out_ref(out, "out")?, r);
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` writable. The result must be freed.
#[no_mangle]
pub unsafe extern "C" fn oplab_power_psd(m: *const OplabMatrix, alpha: f64, out: *mut *mut OplabMatrix) -> OplabStatus {
    guard(|| {
        let alpha = PowerExponent::new(alpha)?;
        let r = oplab::matfun::power_psd(matrix_ref(m, "m")?, alpha, &ToleranceProfile::default())?;
        store(out_ref(out, "out")?, r);
        Ok(())
    })
}

/// # Safety
/// `out` must be writable. The result must be freed.
#[no_mangle]
pub unsafe extern "C" fn oplab_truncated_shift(n: usize, out: *mut *mut OplabMatrix) -> OplabStatus {
    guard(|| {
        store(out_ref(out, "out")?, oplab::counterexamples::truncated_shift(n)?);
        Ok(())
    })
}

unsafe fn vector_arg(x: *const f64, len: usize) -> Result<Vector, OplabError> {
    Ok(Vector::new(complex_slice(x, len, "x")?)?)
}

/// `|<AKx, x>| <= ||K|| <Ax, x>` with `x` given as `len` interleaved complex entries.
/// With `force != 0` failing hypotheses are reported through
/// `hypotheses_hold` instead of an error.
///
/// # Safety
/// `a`, `k` must be live handles, `x` must hold `2 * len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_reid_margin(
    a: *const OplabMatrix,
    k: *const OplabMatrix,
    x: *const f64,
    len: usize,
    mode: OplabMode,
    force: c_int,
    out: *mut OplabMargin,
) -> OplabStatus {
    guard(|| {
        let (a, k) = (matrix_ref(a, "a")?, matrix_ref(k, "k")?);
        let x = vector_arg(x, len)?;
        let r = reid_margin(a, k, &x, mode_of(mode), enforcement(force), &ToleranceProfile::default())?;
        *out_ref(out, "out")? = c_margin(&r.value, r.hypotheses_hold);
        Ok(())
    })
}

/// `|<Tx, x>| <= <|T|x, x>` for hyponormal `T`.
///
/// # Safety
/// `t` must be a live handle, `x` must hold `2 * len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_kittaneh_margin(
    t: *const OplabMatrix,
    x: *const f64,
    len: usize,
    force: c_int,
    out: *mut OplabMargin,
) -> OplabStatus {
    guard(|| {
        let t = matrix_ref(t, "t")?;
        let x = vector_arg(x, len)?;
        let r = kittaneh_margin(t, &x, enforcement(force), &ToleranceProfile::default())?;
        *out_ref(out, "out")? = c_margin(&r.value, r.hypotheses_hold);
        Ok(())
    })
}

/// `|<AKx, x>| <= r(K) <Ax, x>` for `A >= 0` and `K*A = AK`.
///
/// # Safety
/// `a`, `k` must be live handles, `x` must hold `2 * len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_halmos_reid_margin(
    a: *const OplabMatrix,
    k: *const OplabMatrix,
    x: *const f64,
    len: usize,
    force: c_int,
    out: *mut OplabMargin,
) -> OplabStatus {
    guard(|| {
        let (a, k) = (matrix_ref(a, "a")?, matrix_ref(k, "k")?);
        let x = vector_arg(x, len)?;
        let r = halmos_reid_margin(a, k, &x, enforcement(force), &ToleranceProfile::default())?;
        *out_ref(out, "out")? = c_margin(&r.value, r.hypotheses_hold);
        Ok(())
    })
}

/// Certificate for `f(A) <= f(B)` given `0 <= A <= B`. `alpha` is read only
/// for `OPLAB_MONOTONE_POWER`. `passed` receives 1 when the smallest
/// eigenvalue of the difference is within tolerance of nonnegative.
///
/// # Safety
/// `a`, `b` must be live handles; `out` and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn oplab_monotonicity_cert(
    kind: OplabMonotone,
    alpha: f64,
    a: *const OplabMatrix,
    b: *const OplabMatrix,
    force: c_int,
    out: *mut OplabMargin,
    passed: *mut c_int,
) -> OplabStatus {
    guard(|| {
        let (a, b) = (matrix_ref(a, "a")?, matrix_ref(b, "b")?);
        let kind = match kind {
            OplabMonotone::Sqrt => MonotoneKind::Sqrt,
            OplabMonotone::Inverse => MonotoneKind::Inverse,
            OplabMonotone::Square => MonotoneKind::Square,
            OplabMonotone::Power => MonotoneKind::Power(PowerExponent::new(alpha)?),
        };
        let r = monotonicity_cert(kind, a, b, enforcement(force), &ToleranceProfile::default())?;
        *out_ref(out, "out")? = c_margin(&r.value.margin, r.hypotheses_hold);
        *out_ref(passed, "passed")? = r.value.passed as c_int;
        Ok(())
    })
}

unsafe fn emit_string(text: String, out: *mut *mut c_char) -> Result<(), OplabError> {
    let out = out_ref(out, "report")?;
    *out = CString::new(text).expect("JSON has no NUL bytes").into_raw();
    Ok(())
}

/// Runs a campaign described by a JSON configuration (fields as in the CLI;
/// unspecified fields take their defaults) and returns the JSON report.
/// `fuzz != 0` labels the run as a search. `exit_code` receives the CLI
/// exit code of the verdict (0 pass, 1 violation, 2 hypothesis error).
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `report` and `exit_code`
/// writable. Free the report with [`oplab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn oplab_run_check_json(
    config_json: *const c_char,
    fuzz: c_int,
    report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> OplabStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(OplabError::Null("config_json"));
        }
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| Error::InvalidArgument(format!("configuration is not UTF-8: {e}")))?;
        let config = CampaignConfig::from_json(text)?;
        let r = if fuzz != 0 { run_fuzz(&config)? } else { run_check(&config)? };
        let code = out_ref(exit_code, "exit_code")?;
        *code = r.exit_code();
        emit_string(r.to_json(), report)
    })
}

/// Evaluates a named counterexample; `dim == 0` selects the default size.
///
/// # Safety
/// `name` must be a NUL-terminated string and `report` writable. Free the
/// report with [`oplab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn oplab_counterexample_json(
    name: *const c_char,
    dim: usize,
    report: *mut *mut c_char,
) -> OplabStatus {
    guard(|| {
        if name.is_null() {
            return Err(OplabError::Null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|e| Error::InvalidArgument(format!("name is not UTF-8: {e}")))?;
        let dim = (dim != 0).then_some(dim);
        let r = run_counterexample(name, dim, &ToleranceProfile::default())?;
        emit_string(r.to_json(), report)
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oplab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
