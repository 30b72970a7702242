//! C ABI for `tdopt`.
//!
//! Matrices and transforms are opaque handles owned by the caller and
//! released with their `*_free` function. Every fallible call returns a
//! [`TdStatus`]; on failure [`td_last_error`] describes the problem. Strings
//! returned through out-parameters are released with [`td_string_free`].
//! Search limits come from the `TDOPT_LIMITS` environment variable.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tdopt::graphs::{dual_graph, treedepth};
use tdopt::ipsolve::{solve, SolveMode};
use tdopt::matroid::VectorMatroid;
use tdopt::ratmat::RatMatrix;
use tdopt::rowtransform::{transform_pipeline, PipelineOutcome, Strategy, TransformResult};
use tdopt::{Error, Limits};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Unparseable text, JSON or invalid instance.
    Parse = 2,
    /// Input beyond the exact-search limits.
    SizeLimit = 3,
    /// Branch-depth above the requested bound.
    DepthExceeded = 4,
    /// Any other library error.
    Failed = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Solver modes for [`td_solve_json`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdSolveMode {
    Exact = 0,
    Heuristic = 1,
    None = 2,
}

/// Opaque rational matrix.
pub struct TdMatrix(RatMatrix);

/// Opaque transform result.
pub struct TdTransform(TransformResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TdStatus {
    match e {
        Error::Parse(_) | Error::InvalidInstance(_) | Error::NonConvex { .. } => TdStatus::Parse,
        Error::SizeLimit { .. } => TdStatus::SizeLimit,
        Error::BranchDepthExceeded(_) => TdStatus::DepthExceeded,
        _ => TdStatus::Failed,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (TdStatus, String)>) -> TdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside tdopt");
            TdStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (TdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TdStatus, String) {
    (TdStatus::NullArgument, format!("{what} is null"))
}

fn limits() -> Result<Limits, (TdStatus, String)> {
    Limits::from_env().map_err(lib_err)
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TdStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (TdStatus, String)> {
    let c = CString::new(s).map_err(|_| (TdStatus::Failed, "output contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn td_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a matrix in the text format (`m n` header, then rows) or as a
/// JSON array of rows.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_matrix_from_text(text: *const c_char, out: *mut *mut TdMatrix) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = tdopt::io::parse_matrix(read_str(text, "text")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TdMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`td_matrix_from_text`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn td_matrix_free(m: *mut TdMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn td_matrix_dims(m: *const TdMatrix, rows: *mut usize, cols: *mut usize) -> TdStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        if rows.is_null() || cols.is_null() {
            return Err(null("out"));
        }
        *rows = m.0.rows();
        *cols = m.0.cols();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_matrix_rank(m: *const TdMatrix, out: *mut usize) -> TdStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = m.0.rank();
        Ok(())
    })
}

/// Exact branch-depth of the column matroid.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_branch_depth(m: *const TdMatrix, out: *mut usize) -> TdStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (bd, _) =
            tdopt::decomp::branch_depth_exact(&VectorMatroid::from_columns(&m.0), &limits()?).map_err(lib_err)?;
        *out = bd;
        Ok(())
    })
}

/// Tree-depth of the dual graph; `exact` is false when only the greedy
/// upper bound was computed.
///
/// # Safety
/// `m` must be a live handle; `out` and `exact` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn td_dual_treedepth(m: *const TdMatrix, out: *mut usize, exact: *mut bool) -> TdStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let exact = exact.as_mut().ok_or_else(|| null("exact"))?;
        let td = treedepth(&dual_graph(&m.0), limits()?.max_vertices);
        *out = td.value;
        *exact = td.exact;
        Ok(())
    })
}

/// Row-equivalent matrix of dual tree-depth at most the branch-depth, or
/// [`TdStatus::DepthExceeded`] when the branch-depth is above `depth`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_transform(m: *const TdMatrix, depth: usize, out: *mut *mut TdTransform) -> TdStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        match transform_pipeline(&m.0, depth, Strategy::Auto, &limits()?).map_err(lib_err)? {
            PipelineOutcome::Transformed(r) => {
                *out = Box::into_raw(Box::new(TdTransform(*r)));
                Ok(())
            }
            PipelineOutcome::BranchDepthExceeded { branch_depth, bound } => Err((
                TdStatus::DepthExceeded,
                format!("branch-depth {branch_depth} exceeds {bound}"),
            )),
        }
    })
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_transform_depth(t: *const TdTransform, out: *mut usize) -> TdStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("transform"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = t.0.reported_depth;
        Ok(())
    })
}

/// The transform as JSON (same format as `tdopt transform`).
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_transform_json(t: *const TdTransform, out: *mut *mut c_char) -> TdStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("transform"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, tdopt::io::render(&tdopt::io::transform_to_json(&t.0), false))
    })
}

/// # Safety
/// `t` must come from [`td_transform`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn td_transform_free(t: *mut TdTransform) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Solves an instance given as JSON and writes the solution JSON. An
/// infeasible instance is not an error; check the `status` field.
///
/// # Safety
/// `instance` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_solve_json(
    instance: *const c_char,
    mode: TdSolveMode,
    depth: usize,
    out: *mut *mut c_char,
) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = tdopt::io::parse_instance(read_str(instance, "instance")?).map_err(lib_err)?;
        let mode = match mode {
            TdSolveMode::Exact => SolveMode::Exact,
            TdSolveMode::Heuristic => SolveMode::Heuristic,
            TdSolveMode::None => SolveMode::None,
        };
        let s = solve(&inst, depth, mode, &limits()?).map_err(lib_err)?;
        write_string(out, tdopt::io::render(&tdopt::io::solution_to_json(&s), false))
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn td_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
