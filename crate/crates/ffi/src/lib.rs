//! C ABI over the `ceig` library.
//!
//! Tensors cross the boundary as opaque [`CeigPiezoTensor`] handles created
//! by [`ceig_tensor_new`] and released with [`ceig_tensor_free`]. Every
//! fallible function returns a [`CeigStatus`]; on failure
//! [`ceig_last_error_message`] holds a description for the calling thread.
//! Panics are caught at the boundary and reported as `CEIG_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ceig::{bounds, spectral, Error, Interval, PiezoTensor, Shift, SolverConfig, SymmetryMode};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeigStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SymmetryViolation = 3,
    DimensionMismatch = 4,
    NoConvergence = 5,
    NumericalDomain = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque handle to a piezoelectric-type tensor.
pub struct CeigPiezoTensor(PiezoTensor);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeigSolverConfig {
    pub starts: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// True selects the fixed global shift instead of the adaptive one.
    pub static_shift: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeigInterval {
    pub lo: f64,
    pub hi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeigBoundReport {
    pub lambda_a: f64,
    pub lambda_e: f64,
    pub norm_e2: f64,
    pub zmin_diff: f64,
    pub zmax_diff: f64,
    pub additive: CeigInterval,
    pub spectral: CeigInterval,
    pub quadratic: CeigInterval,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(err: &Error) -> CeigStatus {
    match err.root() {
        Error::SymmetryViolation { .. } | Error::NotFullySymmetric { .. } => {
            CeigStatus::SymmetryViolation
        }
        Error::DimensionMismatch { .. } => CeigStatus::DimensionMismatch,
        Error::NoConvergence { .. } => CeigStatus::NoConvergence,
        Error::RadicandNegative { .. } | Error::NegativeLiftedEigenvalue { .. } => {
            CeigStatus::NumericalDomain
        }
        _ => CeigStatus::InvalidInput,
    }
}

fn fail(status: CeigStatus, msg: impl Into<String>) -> CeigStatus {
    set_last_error(msg.into());
    status
}

fn guard(body: impl FnOnce() -> Result<(), CeigStatus>) -> CeigStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            CeigStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(CeigStatus::Panic, "panic inside ceig"),
    }
}

fn lib_err(err: Error) -> CeigStatus {
    fail(status_of(&err), err.to_string())
}

unsafe fn tensor_ref<'a>(p: *const CeigPiezoTensor, what: &str) -> Result<&'a PiezoTensor, CeigStatus> {
    p.as_ref()
        .map(|t| &t.0)
        .ok_or_else(|| fail(CeigStatus::NullPointer, format!("{what} is null")))
}

unsafe fn config_from(p: *const CeigSolverConfig) -> SolverConfig {
    let c = p.as_ref().copied().unwrap_or_else(|| ceig_solver_config_default());
    SolverConfig {
        starts: c.starts,
        tol: c.tol,
        max_iters: c.max_iters,
        seed: c.seed,
        shift: if c.static_shift {
            Shift::Static
        } else {
            Shift::Adaptive
        },
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CeigStatus> {
    p.as_mut()
        .ok_or_else(|| fail(CeigStatus::NullPointer, format!("{what} is null")))
}

unsafe fn copy_out(dst: *mut f64, len: usize, src: &[f64], what: &str) -> Result<(), CeigStatus> {
    if dst.is_null() {
        return Ok(());
    }
    if len < src.len() {
        return Err(fail(
            CeigStatus::BufferTooSmall,
            format!("{what} needs {} slots, got {len}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

fn interval(iv: Interval) -> CeigInterval {
    CeigInterval { lo: iv.lo, hi: iv.hi }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ceig_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or an empty string. The
/// pointer stays valid until the next `ceig_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ceig_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn ceig_solver_config_default() -> CeigSolverConfig {
    let d = SolverConfig::default();
    CeigSolverConfig {
        starts: d.starts,
        tol: d.tol,
        max_iters: d.max_iters,
        seed: d.seed,
        static_shift: d.shift == Shift::Static,
    }
}

/// Builds a tensor from `n³` row-major values (`a_ijk` at `(i·n + j)·n + k`).
/// With `strict` false the values are symmetrized over `(j, k)`; otherwise
/// asymmetric input is rejected.
///
/// # Safety
/// `data` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceig_tensor_new(
    n: usize,
    data: *const f64,
    len: usize,
    strict: bool,
    out: *mut *mut CeigPiezoTensor,
) -> CeigStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if data.is_null() {
            return Err(fail(CeigStatus::NullPointer, "data is null"));
        }
        let raw = std::slice::from_raw_parts(data, len);
        let mode = if strict {
            SymmetryMode::Strict
        } else {
            SymmetryMode::AutoSymmetrize
        };
        let t = PiezoTensor::new(n, raw, mode).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CeigPiezoTensor(t)));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `tensor` must come from [`ceig_tensor_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ceig_tensor_free(tensor: *mut CeigPiezoTensor) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// # Safety
/// `tensor` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ceig_tensor_dim(tensor: *const CeigPiezoTensor, out: *mut usize) -> CeigStatus {
    guard(|| {
        *out_ref(out, "out")? = tensor_ref(tensor, "tensor")?.n();
        Ok(())
    })
}

unsafe fn c_max_common(
    tensor: *const CeigPiezoTensor,
    config: *const CeigSolverConfig,
    lambda: *mut f64,
    x: *mut f64,
    y: *mut f64,
    len: usize,
    solve: fn(&PiezoTensor, &SolverConfig) -> ceig::Result<ceig::CEigenpair>,
) -> CeigStatus {
    guard(|| {
        let t = tensor_ref(tensor, "tensor")?;
        let lambda = out_ref(lambda, "lambda")?;
        let pair = solve(t, &config_from(config)).map_err(lib_err)?;
        copy_out(x, len, &pair.x, "x")?;
        copy_out(y, len, &pair.y, "y")?;
        *lambda = pair.lambda;
        Ok(())
    })
}

/// Largest C-eigenvalue via the lifted fourth-order tensor. `config` may be
/// null for defaults; `x` and `y` may be null, otherwise they need `len ≥ n`.
///
/// # Safety
/// Pointers must be null or valid for the sizes described above.
#[no_mangle]
pub unsafe extern "C" fn ceig_c_max(
    tensor: *const CeigPiezoTensor,
    config: *const CeigSolverConfig,
    lambda: *mut f64,
    x: *mut f64,
    y: *mut f64,
    len: usize,
) -> CeigStatus {
    c_max_common(tensor, config, lambda, x, y, len, spectral::c_max_via_lift)
}

/// Same contract as [`ceig_c_max`], solved by alternating ascent on the
/// trilinear form.
///
/// # Safety
/// See [`ceig_c_max`].
#[no_mangle]
pub unsafe extern "C" fn ceig_c_max_alternating(
    tensor: *const CeigPiezoTensor,
    config: *const CeigSolverConfig,
    lambda: *mut f64,
    x: *mut f64,
    y: *mut f64,
    len: usize,
) -> CeigStatus {
    c_max_common(tensor, config, lambda, x, y, len, spectral::c_max_alternating)
}

/// Spectral norm of the `n × n²` slice unfolding.
///
/// # Safety
/// `tensor` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ceig_spectral_norm(tensor: *const CeigPiezoTensor, out: *mut f64) -> CeigStatus {
    guard(|| {
        *out_ref(out, "out")? = tensor_ref(tensor, "tensor")?.unfold_spectral_norm();
        Ok(())
    })
}

/// The three perturbation intervals for `a + e`. `config` may be null.
///
/// # Safety
/// `a` and `e` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ceig_bound_report(
    a: *const CeigPiezoTensor,
    e: *const CeigPiezoTensor,
    config: *const CeigSolverConfig,
    out: *mut CeigBoundReport,
) -> CeigStatus {
    guard(|| {
        let a = tensor_ref(a, "a")?;
        let e = tensor_ref(e, "e")?;
        let out = out_ref(out, "out")?;
        let r = bounds::full_report(a, e, &config_from(config)).map_err(lib_err)?;
        *out = CeigBoundReport {
            lambda_a: r.lambda_a,
            lambda_e: r.lambda_e,
            norm_e2: r.norm_e2,
            zmin_diff: r.zmin_diff,
            zmax_diff: r.zmax_diff,
            additive: interval(r.interval_21),
            spectral: interval(r.interval_24),
            quadratic: interval(r.interval_25),
        };
        Ok(())
    })
}

/// Writes whether quadratic ⊆ additive ⊆ spectral holds for `report`.
///
/// # Safety
/// `report` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ceig_check_nesting(report: *const CeigBoundReport, out: *mut bool) -> CeigStatus {
    guard(|| {
        let r = report
            .as_ref()
            .ok_or_else(|| fail(CeigStatus::NullPointer, "report is null"))?;
        let out = out_ref(out, "out")?;
        let iv = |i: CeigInterval| Interval { lo: i.lo, hi: i.hi };
        *out = bounds::check_nesting(&ceig::BoundReport {
            lambda_a: r.lambda_a,
            lambda_e: r.lambda_e,
            norm_e2: r.norm_e2,
            zmin_diff: r.zmin_diff,
            zmax_diff: r.zmax_diff,
            interval_21: iv(r.additive),
            interval_24: iv(r.spectral),
            interval_25: iv(r.quadratic),
        });
        Ok(())
    })
}
