//! C ABI for the knotmesh solver.
//!
//! Every function returns a [`KmStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. The message for the most recent failure on the calling thread
//! is available from [`km_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knotmesh::bench::{self, CaseConfig, CaseId, ErrorReport};
use knotmesh::bkm::{self, BkmSolution};
use knotmesh::geometry::Placement;
use knotmesh::kernels::{self, KernelVariant};
use knotmesh::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numeric = 4,
    Unsupported = 5,
    Panic = 6,
}

// Integer codes rather than C enums so that out-of-range values from the
// caller are rejected instead of being undefined behaviour.
pub const KM_PLACEMENT_UNIFORM: u32 = 0;
pub const KM_PLACEMENT_CHEBYSHEV: u32 = 1;
pub const KM_FORMAT_CSV: u32 = 0;
pub const KM_FORMAT_MARKDOWN: u32 = 1;

/// Run settings. `placement` is a `KM_PLACEMENT_*` code;
/// `literal_kernel` is nonzero to select the printed frozen-velocity
/// kernel (burger case only).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmCaseConfig {
    pub boundary: usize,
    pub interior: usize,
    pub shape_c: f64,
    pub placement: u32,
    pub literal_kernel: u8,
}

impl From<CaseConfig> for KmCaseConfig {
    fn from(c: CaseConfig) -> Self {
        KmCaseConfig {
            boundary: c.boundary,
            interior: c.interior,
            shape_c: c.shape_c,
            placement: match c.placement {
                Placement::UniformParameter => KM_PLACEMENT_UNIFORM,
                Placement::ChebyshevParameter => KM_PLACEMENT_CHEBYSHEV,
            },
            literal_kernel: u8::from(c.variant == KernelVariant::Literal),
        }
    }
}

impl TryFrom<KmCaseConfig> for CaseConfig {
    type Error = Error;

    fn try_from(c: KmCaseConfig) -> Result<Self, Error> {
        Ok(CaseConfig {
            boundary: c.boundary,
            interior: c.interior,
            shape_c: c.shape_c,
            placement: match c.placement {
                KM_PLACEMENT_UNIFORM => Placement::UniformParameter,
                KM_PLACEMENT_CHEBYSHEV => Placement::ChebyshevParameter,
                other => return Err(Error::Config(format!("unknown placement code {other}"))),
            },
            variant: if c.literal_kernel != 0 {
                KernelVariant::Literal
            } else {
                KernelVariant::Derived
            },
        })
    }
}

/// A solved benchmark case.
pub struct KmSolution {
    case: CaseId,
    inner: BkmSolution,
}

/// An error table for a benchmark run.
pub struct KmReport {
    inner: ErrorReport,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KmStatus {
    match e {
        Error::Case { source, .. } => status_of(source),
        Error::Config(_) | Error::DimensionMismatch { .. } => KmStatus::InvalidArgument,
        Error::Domain(_) => KmStatus::Domain,
        Error::Unsupported(_) => KmStatus::Unsupported,
        _ => KmStatus::Numeric,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> KmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KmStatus::Ok,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            KmStatus::Panic
        }
    }
}

/// Null checks are reported as [`KmStatus::NullPointer`].
macro_rules! require {
    ($p:expr, $name:literal) => {
        if $p.is_null() {
            set_error(concat!("null pointer: ", $name));
            return KmStatus::NullPointer;
        }
    };
}

unsafe fn case_from(name: *const c_char) -> Result<CaseId, Error> {
    let s = CStr::from_ptr(name)
        .to_str()
        .map_err(|_| Error::Config("case name is not valid UTF-8".into()))?;
    s.parse()
}

/// Message for the last failed call on this thread; valid until the next
/// failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn km_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn bessel_into(f: fn(f64) -> Result<f64, Error>, x: f64, out: *mut f64) -> KmStatus {
    require!(out, "out");
    guard(|| {
        *out = f(x)?;
        Ok(())
    })
}

/// J0(x) into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_bessel_j0(x: f64, out: *mut f64) -> KmStatus {
    bessel_into(kernels::bessel_j0, x, out)
}

/// J1(x) into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_bessel_j1(x: f64, out: *mut f64) -> KmStatus {
    bessel_into(kernels::bessel_j1, x, out)
}

/// Y0(x) into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_bessel_y0(x: f64, out: *mut f64) -> KmStatus {
    bessel_into(kernels::bessel_y0, x, out)
}

/// Y1(x) into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_bessel_y1(x: f64, out: *mut f64) -> KmStatus {
    bessel_into(kernels::bessel_y1, x, out)
}

/// I0(x) into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_bessel_i0(x: f64, out: *mut f64) -> KmStatus {
    bessel_into(kernels::bessel_i0, x, out)
}

/// I1(x) into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_bessel_i1(x: f64, out: *mut f64) -> KmStatus {
    bessel_into(kernels::bessel_i1, x, out)
}

static CASE_NAMES: [&CStr; 6] = [
    c"helmholtz",
    c"laplace",
    c"convection-x",
    c"convection-xy",
    c"varying-helmholtz",
    c"burger",
];

/// Number of registered benchmark cases.
#[no_mangle]
pub extern "C" fn km_case_count() -> usize {
    CaseId::ALL.len()
}

/// Static name of case `index`, or null when out of range.
#[no_mangle]
pub extern "C" fn km_case_name(index: usize) -> *const c_char {
    CASE_NAMES.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// Writes the default configuration of the named case into `out`.
///
/// # Safety
/// `name` must be null or a NUL-terminated string; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_case_default_config(name: *const c_char, out: *mut KmCaseConfig) -> KmStatus {
    require!(name, "name");
    require!(out, "out");
    guard(|| {
        let id = case_from(name)?;
        *out = bench::case(id).default_config().into();
        Ok(())
    })
}

/// Solves the named case. On success `*out` owns a handle to release with
/// [`km_solution_free`]. A null `config` selects the case defaults.
///
/// # Safety
/// `name` must be a NUL-terminated string, `config` null or readable, and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_solution_new(
    name: *const c_char,
    config: *const KmCaseConfig,
    out: *mut *mut KmSolution,
) -> KmStatus {
    require!(name, "name");
    require!(out, "out");
    *out = ptr::null_mut();
    guard(|| {
        let id = case_from(name)?;
        let bc = bench::case(id);
        let cfg = if config.is_null() {
            bc.default_config()
        } else {
            (*config).try_into()?
        };
        let inner = bkm::solve(&bc.spec(&cfg)?)?;
        *out = Box::into_raw(Box::new(KmSolution { case: id, inner }));
        Ok(())
    })
}

/// Releases a solution handle. Null is ignored.
///
/// # Safety
/// `sol` must be null or a handle from [`km_solution_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn km_solution_free(sol: *mut KmSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Evaluates the solution at (x, y).
///
/// # Safety
/// `sol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_solution_eval(sol: *const KmSolution, x: f64, y: f64, out: *mut f64) -> KmStatus {
    require!(sol, "sol");
    require!(out, "out");
    guard(|| {
        *out = (*sol).inner.value([x, y])?;
        Ok(())
    })
}

/// Exact solution of the case the handle was solved for.
///
/// # Safety
/// `sol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_solution_exact(sol: *const KmSolution, x: f64, y: f64, out: *mut f64) -> KmStatus {
    require!(sol, "sol");
    require!(out, "out");
    *out = bench::case((*sol).case).exact([x, y]);
    KmStatus::Ok
}

/// Condition estimate of the final linear system.
///
/// # Safety
/// `sol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_solution_condition(sol: *const KmSolution, out: *mut f64) -> KmStatus {
    require!(sol, "sol");
    require!(out, "out");
    *out = (*sol).inner.condition();
    KmStatus::Ok
}

/// Copies up to `cap` expansion coefficients into `buf` and stores the
/// full count in `len`. Pass `buf = NULL` to query the count.
///
/// # Safety
/// `sol` must be a live handle, `len` valid for writes, and `buf` null or
/// valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn km_solution_coefficients(
    sol: *const KmSolution,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> KmStatus {
    require!(sol, "sol");
    require!(len, "len");
    let beta = (*sol).inner.beta();
    *len = beta.len();
    if !buf.is_null() {
        let n = beta.len().min(cap);
        ptr::copy_nonoverlapping(beta.as_ptr(), buf, n);
    }
    KmStatus::Ok
}

/// Runs the named case and renders its error table in `format`
/// (`KM_FORMAT_*`). A null `config` selects the case defaults.
///
/// # Safety
/// `name` must be a NUL-terminated string, `config` null or readable, and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_report_new(
    name: *const c_char,
    config: *const KmCaseConfig,
    format: u32,
    out: *mut *mut KmReport,
) -> KmStatus {
    require!(name, "name");
    require!(out, "out");
    *out = ptr::null_mut();
    guard(|| {
        let bc = bench::case(case_from(name)?);
        let cfg = if config.is_null() {
            bc.default_config()
        } else {
            (*config).try_into()?
        };
        let inner = bench::run_case(&bc, &cfg)?;
        let text = match format {
            KM_FORMAT_CSV => inner.to_csv(),
            KM_FORMAT_MARKDOWN => inner.to_markdown(),
            other => return Err(Error::Config(format!("unknown format code {other}"))),
        };
        let text = CString::new(text).map_err(|_| Error::Config("report text contains NUL".into()))?;
        *out = Box::into_raw(Box::new(KmReport { inner, text }));
        Ok(())
    })
}

/// Report text, owned by the handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn km_report_text(report: *const KmReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).text.as_ptr()
}

/// Average relative error over the report's consistent points.
///
/// # Safety
/// `report` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn km_report_average_rel_err(report: *const KmReport, out: *mut f64) -> KmStatus {
    require!(report, "report");
    require!(out, "out");
    *out = (*report).inner.average_rel_err;
    KmStatus::Ok
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle from [`km_report_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn km_report_free(report: *mut KmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_match_registry() {
        assert_eq!(km_case_count(), CASE_NAMES.len());
        for (i, id) in CaseId::ALL.iter().enumerate() {
            let s = unsafe { CStr::from_ptr(km_case_name(i)) };
            assert_eq!(s.to_str().unwrap(), id.name());
        }
        assert!(km_case_name(6).is_null());
    }

    #[test]
    fn config_round_trip() {
        for id in CaseId::ALL {
            let c = bench::case(id).default_config();
            assert_eq!(CaseConfig::try_from(KmCaseConfig::from(c)).unwrap(), c);
        }
    }
}
