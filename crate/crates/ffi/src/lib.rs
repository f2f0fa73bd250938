//! C ABI over `blockcode`.
//!
//! Representations live behind an opaque handle. Every analysis returns a
//! status code and, through an out-parameter, a JSON document owned by the
//! caller and released with `bc_string_free`. On an error status the JSON
//! is a structured error object and `bc_last_error` holds its message.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blockcode::criterion::{check_representation, MuMode};
use blockcode::decompose::{decompose_representation, envelope_report, verify_decomposition, BlockcodeDecomposition};
use blockcode::flag::{compute_flag, FlagLimits};
use blockcode::realize::EnvelopeLimits;
use blockcode::rep::{parse_representation, Representation};
use blockcode::Error;
use serde_json::{json, Value};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcStatus {
    /// Pass, verified, or plain success.
    Ok = 0,
    /// The check ran and the answer is negative.
    Refuted = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    SyntaxError = 4,
    ValidationError = 5,
    ClosureDivergence = 6,
    CycleError = 7,
    CriterionViolated = 8,
    ConstructionFailure = 9,
    AlignmentFailure = 10,
    OtherError = 11,
    Panic = 12,
}

impl From<&Error> for BcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Syntax(_) => BcStatus::SyntaxError,
            Error::Validation { .. } => BcStatus::ValidationError,
            Error::ClosureDivergence { .. } => BcStatus::ClosureDivergence,
            Error::Cycle(_) => BcStatus::CycleError,
            Error::CriterionViolated { .. } => BcStatus::CriterionViolated,
            Error::ConstructionFailure { .. } => BcStatus::ConstructionFailure,
            Error::AlignmentFailure(_) => BcStatus::AlignmentFailure,
            _ => BcStatus::OtherError,
        }
    }
}

/// Möbius convention for `bc_check`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcMuMode {
    Standard = 0,
    Literal = 1,
}

/// Opaque parsed representation.
pub struct BcRepresentation {
    inner: Representation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: Option<String>) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = message.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    });
}

fn to_c_string(v: &Value) -> *mut c_char {
    CString::new(v.to_string()).expect("JSON has no nul bytes").into_raw()
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BcStatus> {
    if s.is_null() {
        return Err(BcStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| BcStatus::InvalidUtf8)
}

/// Runs `f` behind a panic guard and writes its JSON into `out`.
unsafe fn respond<F>(out: *mut *mut c_char, f: F) -> BcStatus
where
    F: FnOnce() -> Result<(Value, BcStatus), Error>,
{
    if out.is_null() {
        set_last_error(Some("output pointer is null".into()));
        return BcStatus::NullArgument;
    }
    *out = ptr::null_mut();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok((v, status))) => {
            set_last_error(None);
            *out = to_c_string(&v);
            status
        }
        Ok(Err(e)) => {
            set_last_error(Some(e.to_string()));
            *out = to_c_string(&json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
            BcStatus::from(&e)
        }
        Err(_) => {
            set_last_error(Some("internal panic".into()));
            BcStatus::Panic
        }
    }
}

unsafe fn handle<'a>(rep: *const BcRepresentation) -> Option<&'a Representation> {
    rep.as_ref().map(|r| &r.inner)
}

fn limits(max_rounds: usize, max_elements: usize) -> FlagLimits {
    let d = FlagLimits::default();
    FlagLimits {
        max_rounds: if max_rounds == 0 { d.max_rounds } else { max_rounds },
        max_elements_per_object: if max_elements == 0 { d.max_elements_per_object } else { max_elements },
    }
}

/// Parses a representation from NUL-terminated JSON. On success `*out`
/// receives a handle to release with `bc_representation_free`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_representation_parse(json: *const c_char, out: *mut *mut BcRepresentation) -> BcStatus {
    if out.is_null() {
        set_last_error(Some("output pointer is null".into()));
        return BcStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => {
            set_last_error(Some("input is null or not UTF-8".into()));
            return status;
        }
    };
    match catch_unwind(|| parse_representation(text.as_bytes())) {
        Ok(Ok(r)) => {
            set_last_error(None);
            *out = Box::into_raw(Box::new(BcRepresentation { inner: r }));
            BcStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(Some(e.to_string()));
            BcStatus::from(&e)
        }
        Err(_) => {
            set_last_error(Some("internal panic".into()));
            BcStatus::Panic
        }
    }
}

/// # Safety
/// `rep` must come from `bc_representation_parse` and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bc_representation_free(rep: *mut BcRepresentation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Number of objects, or 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bc_representation_object_count(rep: *const BcRepresentation) -> usize {
    handle(rep).map_or(0, |r| r.objects().len())
}

/// Criterion report. Returns `Ok` on pass and `Refuted` on fail.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_check(rep: *const BcRepresentation, mu: BcMuMode, out: *mut *mut c_char) -> BcStatus {
    let Some(r) = handle(rep) else {
        return BcStatus::NullArgument;
    };
    respond(out, || {
        let flag = compute_flag(r, FlagLimits::default())?;
        let mode = match mu {
            BcMuMode::Standard => MuMode::Standard,
            BcMuMode::Literal => MuMode::Literal,
        };
        let report = check_representation(r, &flag, mode);
        let status = if report.passed() { BcStatus::Ok } else { BcStatus::Refuted };
        Ok((report.to_json(false), status))
    })
}

/// Flag report. Zero limits select the defaults.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_flag(
    rep: *const BcRepresentation,
    max_rounds: usize,
    max_elements: usize,
    out: *mut *mut c_char,
) -> BcStatus {
    let Some(r) = handle(rep) else {
        return BcStatus::NullArgument;
    };
    respond(out, || {
        let flag = compute_flag(r, limits(max_rounds, max_elements))?;
        Ok((flag.to_json(r), BcStatus::Ok))
    })
}

/// Decomposition certificate.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_decompose(rep: *const BcRepresentation, out: *mut *mut c_char) -> BcStatus {
    let Some(r) = handle(rep) else {
        return BcStatus::NullArgument;
    };
    respond(out, || {
        let d = decompose_representation(r, FlagLimits::default())?;
        Ok((d.to_json(), BcStatus::Ok))
    })
}

/// Verifies a certificate given as JSON. Returns `Ok` or `Refuted`.
///
/// # Safety
/// `rep` must be a live handle, `certificate` a valid C string, and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_verify(
    rep: *const BcRepresentation,
    certificate: *const c_char,
    out: *mut *mut c_char,
) -> BcStatus {
    let Some(r) = handle(rep) else {
        return BcStatus::NullArgument;
    };
    let text = match read_str(certificate) {
        Ok(t) => t,
        Err(status) => return status,
    };
    respond(out, || {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        let d = BlockcodeDecomposition::from_json(&doc)?;
        let report = verify_decomposition(r, &d);
        let status = if report.ok { BcStatus::Ok } else { BcStatus::Refuted };
        Ok((report.to_json(), status))
    })
}

/// Pseudo-inverses and the inverse-category axiom report. Returns
/// `Refuted` if an axiom fails.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_envelope(rep: *const BcRepresentation, out: *mut *mut c_char) -> BcStatus {
    let Some(r) = handle(rep) else {
        return BcStatus::NullArgument;
    };
    respond(out, || {
        let flag = compute_flag(r, FlagLimits::default())?;
        let (report, ok) = envelope_report(r, &flag, EnvelopeLimits::default())?;
        Ok((report, if ok { BcStatus::Ok } else { BcStatus::Refuted }))
    })
}

/// Möbius tables of every object's flag poset.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_mobius(rep: *const BcRepresentation, out: *mut *mut c_char) -> BcStatus {
    let Some(r) = handle(rep) else {
        return BcStatus::NullArgument;
    };
    respond(out, || {
        let flag = compute_flag(r, FlagLimits::default())?;
        let objects: Vec<Value> = flag
            .posets()
            .iter()
            .enumerate()
            .map(|(o, p)| {
                let t = p.mobius();
                json!({"object": r.objects()[o].id, "one_var": t.one_var, "two_var": t.two_var})
            })
            .collect();
        Ok((json!({"objects": objects}), BcStatus::Ok))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn bc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last error on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
