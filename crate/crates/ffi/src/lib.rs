//! C ABI over `vcfold`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`VcfoldStatus`]; on failure, [`vcfold_last_error_message`]
//! describes the most recent error on the calling thread. Strings returned
//! through `char **` out-parameters are released with [`vcfold_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vcfold::construct::{build_theorem1, build_theorem2};
use vcfold::{
    bundled, BoxGadget, Error, SetSystem, Theorem1Instance, Theorem2Instance, VerifyMode,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcfoldStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Degenerate = 4,
    ConstructionFailure = 5,
    GuardExceeded = 6,
    Parse = 7,
    /// A verification ran to completion and found counterexamples.
    VerificationFailed = 8,
    Panic = 99,
}

/// A finite set system over ground set `0..n`, `n <= 64`.
pub struct VcfoldSetSystem(SetSystem);

/// A box-family certificate.
pub struct VcfoldGadget(BoxGadget);

/// A point set shattered by unions of restricted half-spaces.
pub struct VcfoldUnionInstance(Theorem1Instance);

/// A hyperplane set shattered by low-dimensional open simplices.
pub struct VcfoldSimplexInstance(Theorem2Instance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> VcfoldStatus {
    match e {
        Error::InvalidArgument(_) => VcfoldStatus::InvalidArgument,
        Error::DimensionMismatch { .. } => VcfoldStatus::DimensionMismatch,
        Error::Degenerate(_) => VcfoldStatus::Degenerate,
        Error::ConstructionFailure(_) => VcfoldStatus::ConstructionFailure,
        Error::Guard { .. } => VcfoldStatus::GuardExceeded,
        Error::Parse(_) => VcfoldStatus::Parse,
    }
}

struct Fail(VcfoldStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(VcfoldStatus::Parse, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> VcfoldStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VcfoldStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VcfoldStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(VcfoldStatus::NullPointer, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(VcfoldStatus::Parse, format!("string is not UTF-8: {e}")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let out = out_ref(out)?;
    let c = CString::new(s)
        .map_err(|_| Fail(VcfoldStatus::InvalidArgument, "interior NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    *out_ref(out)? = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn vcfold_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn vcfold_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a system from `len` bitmasks; bit `i` marks element `i`.
///
/// # Safety
/// `masks` must point to `len` readable values (or be NULL with `len == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_new(
    ground_size: usize,
    masks: *const u64,
    len: usize,
    out: *mut *mut VcfoldSetSystem,
) -> VcfoldStatus {
    guard(|| {
        let masks = if len == 0 {
            &[][..]
        } else {
            if masks.is_null() {
                return Err(null());
            }
            std::slice::from_raw_parts(masks, len)
        };
        let sys = SetSystem::from_masks(ground_size, masks.iter().copied())?;
        write_handle(out, VcfoldSetSystem(sys))
    })
}

/// Parses `{"ground_size": n, "sets": [[...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_from_json(
    json: *const c_char,
    out: *mut *mut VcfoldSetSystem,
) -> VcfoldStatus {
    guard(|| {
        let file: vcfold::setsys::SetSystemFile = serde_json::from_str(read_str(json)?)?;
        let (sys, _) = file.into_system()?;
        write_handle(out, VcfoldSetSystem(sys))
    })
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_to_json(
    sys: *const VcfoldSetSystem,
    out: *mut *mut c_char,
) -> VcfoldStatus {
    guard(|| {
        let file = vcfold::setsys::SetSystemFile::from(&borrow(sys)?.0);
        write_string(out, serde_json::to_string(&file)?)
    })
}

/// # Safety
/// `sys` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_free(sys: *mut VcfoldSetSystem) {
    free_handle(sys)
}

/// Ground size, or 0 for NULL.
///
/// # Safety
/// `sys` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_ground_size(sys: *const VcfoldSetSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.ground_size())
}

/// Number of member sets, or 0 for NULL.
///
/// # Safety
/// `sys` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_len(sys: *const VcfoldSetSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.len())
}

/// Copies up to `cap` member masks, in canonical order, into `buf`.
/// `*written` receives the number copied.
///
/// # Safety
/// `buf` must have room for `cap` values; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_masks(
    sys: *const VcfoldSetSystem,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> VcfoldStatus {
    guard(|| {
        let sets = borrow(sys)?.0.sets();
        let n = sets.len().min(cap);
        if n > 0 {
            if buf.is_null() {
                return Err(null());
            }
            ptr::copy_nonoverlapping(sets.as_ptr(), buf, n);
        }
        *out_ref(written)? = n;
        Ok(())
    })
}

/// VC-dimension and the lexicographically smallest shattered set of that
/// size, as a bitmask.
///
/// # Safety
/// `sys` must be a live handle; `dim` must be writable; `witness` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_vc_dim(
    sys: *const VcfoldSetSystem,
    dim: *mut usize,
    witness: *mut u64,
) -> VcfoldStatus {
    guard(|| {
        let vc = borrow(sys)?.0.vc_dim()?;
        *out_ref(dim)? = vc.dim;
        if let Some(w) = witness.as_mut() {
            *w = vcfold::setsys::mask_of(&vc.witness);
        }
        Ok(())
    })
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_k_fold_union(
    sys: *const VcfoldSetSystem,
    k: usize,
    out: *mut *mut VcfoldSetSystem,
) -> VcfoldStatus {
    guard(|| {
        let r = borrow(sys)?.0.k_fold_union(k)?;
        write_handle(out, VcfoldSetSystem(r))
    })
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_k_fold_intersection(
    sys: *const VcfoldSetSystem,
    k: usize,
    out: *mut *mut VcfoldSetSystem,
) -> VcfoldStatus {
    guard(|| {
        let r = borrow(sys)?.0.k_fold_intersection(k)?;
        write_handle(out, VcfoldSetSystem(r))
    })
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_set_system_complement(
    sys: *const VcfoldSetSystem,
    out: *mut *mut VcfoldSetSystem,
) -> VcfoldStatus {
    guard(|| {
        let r = borrow(sys)?.0.complement();
        write_handle(out, VcfoldSetSystem(r))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_gadget_from_json(
    json: *const c_char,
    out: *mut *mut VcfoldGadget,
) -> VcfoldStatus {
    guard(|| {
        let g: BoxGadget = serde_json::from_str(read_str(json)?)?;
        write_handle(out, VcfoldGadget(g))
    })
}

/// The certificate shipped for `(n, dim)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_gadget_bundled(
    n: usize,
    dim: usize,
    out: *mut *mut VcfoldGadget,
) -> VcfoldStatus {
    guard(|| write_handle(out, VcfoldGadget(bundled::gadget(n, dim)?)))
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vcfold_gadget_free(g: *mut VcfoldGadget) {
    free_handle(g)
}

/// Re-verifies every subset from scratch. Returns `Ok` when all pass and
/// `VerificationFailed` otherwise; `report` (may be NULL) receives a JSON
/// summary either way.
///
/// # Safety
/// `g` must be a live handle; `report` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_gadget_verify(
    g: *const VcfoldGadget,
    report: *mut *mut c_char,
) -> VcfoldStatus {
    guard(|| {
        let r = borrow(g)?.0.verify()?;
        if !report.is_null() {
            let json = serde_json::json!({
                "ok": r.ok,
                "boxes": r.boxes,
                "subsets_checked": r.subsets_checked,
                "failing_subsets": r.failing_subsets,
                "max_witness_size": r.max_witness_size,
            });
            write_string(report, json.to_string())?;
        }
        if r.ok {
            Ok(())
        } else {
            Err(Fail(
                VcfoldStatus::VerificationFailed,
                format!("{} subsets have no witness", r.failing_subsets.len()),
            ))
        }
    })
}

/// Builds the union instance for even `d >= 4` and `k >= 2`. With a NULL
/// `gadget`, the bundled certificate of the right order is used.
///
/// # Safety
/// `gadget` must be NULL or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_union_instance_build(
    d: usize,
    k: usize,
    gadget: *const VcfoldGadget,
    out: *mut *mut VcfoldUnionInstance,
) -> VcfoldStatus {
    guard(|| {
        let inst = match gadget.as_ref() {
            Some(g) => build_theorem1(d, k, g.0.clone())?,
            None => bundled::theorem1(d, k)?,
        };
        write_handle(out, VcfoldUnionInstance(inst))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_union_instance_from_json(
    json: *const c_char,
    out: *mut *mut VcfoldUnionInstance,
) -> VcfoldStatus {
    guard(|| {
        let inst: Theorem1Instance = serde_json::from_str(read_str(json)?)?;
        write_handle(out, VcfoldUnionInstance(inst))
    })
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_union_instance_to_json(
    inst: *const VcfoldUnionInstance,
    out: *mut *mut c_char,
) -> VcfoldStatus {
    guard(|| write_string(out, serde_json::to_string(&borrow(inst)?.0)?))
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vcfold_union_instance_len(inst: *const VcfoldUnionInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.len())
}

/// # Safety
/// `inst` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vcfold_union_instance_free(inst: *mut VcfoldUnionInstance) {
    free_handle(inst)
}

/// Exhaustive verification; `report` (may be NULL) receives the JSON result.
/// Returns `VerificationFailed` when some subset has no witness.
///
/// # Safety
/// `inst` must be a live handle; `report` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_union_instance_verify(
    inst: *const VcfoldUnionInstance,
    report: *mut *mut c_char,
) -> VcfoldStatus {
    guard(|| {
        let r = borrow(inst)?.0.verify(VerifyMode::Exhaustive)?;
        finish_theorem_report(&r, report)
    })
}

/// Dualizes a union instance.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_simplex_instance_from_union(
    inst: *const VcfoldUnionInstance,
    out: *mut *mut VcfoldSimplexInstance,
) -> VcfoldStatus {
    guard(|| {
        let base = borrow(inst)?.0.clone();
        let k = base.k;
        write_handle(out, VcfoldSimplexInstance(build_theorem2(base, k)?))
    })
}

/// # Safety
/// `inst` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vcfold_simplex_instance_free(inst: *mut VcfoldSimplexInstance) {
    free_handle(inst)
}

/// Exhaustive verification of the simplex instance; also fails if any
/// vertex sign evaluates to zero.
///
/// # Safety
/// `inst` must be a live handle; `report` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn vcfold_simplex_instance_verify(
    inst: *const VcfoldSimplexInstance,
    report: *mut *mut c_char,
) -> VcfoldStatus {
    guard(|| {
        let r = borrow(inst)?.0.verify(VerifyMode::Exhaustive)?;
        finish_theorem_report(&r, report)
    })
}

unsafe fn finish_theorem_report(
    r: &vcfold::TheoremReport,
    report: *mut *mut c_char,
) -> Result<(), Fail> {
    if !report.is_null() {
        write_string(report, serde_json::to_string(r)?)?;
    }
    if r.shattered {
        Ok(())
    } else {
        Err(Fail(
            VcfoldStatus::VerificationFailed,
            format!("{} subsets failed", r.failing_subsets.len()),
        ))
    }
}
