//! C ABI over `kclass`.
//!
//! Fields and bundles are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`KcStatus`]; on failure a message is available from [`kc_last_error`]
//! on the same thread. Strings returned through out-parameters are
//! NUL-terminated UTF-8 and must be released with [`kc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kclass::cli::format;
use kclass::fields::{Field, FieldSpec};
use kclass::reconstruct::{self, InvariantBundle, TieBreak};
use kclass::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidDiscriminant = 3,
    InsufficientData = 4,
    MalformedBundle = 5,
    InternalContradiction = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// A realised field specification.
pub struct KcField {
    field: Field,
}

/// An invariant bundle.
pub struct KcBundle {
    bundle: InvariantBundle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> KcStatus {
    match e {
        Error::InvalidDiscriminant(..) => KcStatus::InvalidDiscriminant,
        Error::InsufficientGenerators { .. } | Error::MissingEntry(_) => KcStatus::InsufficientData,
        Error::MalformedBundle(_)
        | Error::NonHomogeneousEntry { .. }
        | Error::FreeSummandInEntry { .. }
        | Error::NotPerfectPower { .. }
        | Error::RecoveredNormNotPrimePower { .. } => KcStatus::MalformedBundle,
        Error::InternalContradiction(_) => KcStatus::InternalContradiction,
        _ => KcStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), KcStatus>) -> KcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside kclass");
            KcStatus::Panic
        }
    }
}

fn lib<T>(r: kclass::Result<T>) -> Result<T, KcStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), KcStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(KcStatus::NullPointer);
    }
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, KcStatus> {
    non_null(p, what)?;
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        KcStatus::InvalidUtf8
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. Release with
/// [`kc_string_free`].
#[no_mangle]
pub extern "C" fn kc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Imaginary quadratic field of fundamental discriminant `d < 0`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn kc_field_from_discriminant(d: i64, out: *mut *mut KcField) -> KcStatus {
    guard(|| {
        non_null(out, "out")?;
        let field = lib(FieldSpec::quadratic(d).realize())?;
        *out = Box::into_raw(Box::new(KcField { field }));
        Ok(())
    })
}

/// Synthetic field from the JSON spec format used by `kclass --spec`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_field_from_synthetic_json(json: *const c_char, out: *mut *mut KcField) -> KcStatus {
    guard(|| {
        non_null(out, "out")?;
        let text = read_str(json, "json")?;
        let spec = lib(format::synthetic_spec_from_json(text))?;
        let field = lib(spec.realize())?;
        *out = Box::into_raw(Box::new(KcField { field }));
        Ok(())
    })
}

/// # Safety
/// `f` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_field_free(f: *mut KcField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live field handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_field_class_number(f: *const KcField, out: *mut usize) -> KcStatus {
    guard(|| {
        non_null(f, "field")?;
        non_null(out, "out")?;
        *out = (*f).field.class_number();
        Ok(())
    })
}

/// Class group as text, e.g. `Z/2 ⊕ Z/4` or `trivial`.
///
/// # Safety
/// `f` must be a live field handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_field_class_group(f: *const KcField, out: *mut *mut c_char) -> KcStatus {
    guard(|| {
        non_null(f, "field")?;
        non_null(out, "out")?;
        *out = into_c_string((*f).field.class_group().group().to_string());
        Ok(())
    })
}

/// Lazy bundle over every prime ideal of norm `≤ prime_bound`; entries
/// beyond `∅` and the singletons are evaluated on demand.
///
/// # Safety
/// `f` must be a live field handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bundle_build(f: *const KcField, prime_bound: u64, out: *mut *mut KcBundle) -> KcStatus {
    guard(|| {
        non_null(f, "field")?;
        non_null(out, "out")?;
        let field = &(*f).field;
        let primes = lib(field.enumerate_prime_ideals(prime_bound))?;
        let bundle = lib(reconstruct::build_bundle(field.class_group(), &primes, &[]))?;
        *out = Box::into_raw(Box::new(KcBundle { bundle }));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bundle_from_json(json: *const c_char, out: *mut *mut KcBundle) -> KcStatus {
    guard(|| {
        non_null(out, "out")?;
        let text = read_str(json, "json")?;
        let bundle = lib(format::bundle_from_json(text))?;
        *out = Box::into_raw(Box::new(KcBundle { bundle }));
        Ok(())
    })
}

/// Entries evaluated so far, in the bundle file format.
///
/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bundle_to_json(b: *const KcBundle, out: *mut *mut c_char) -> KcStatus {
    guard(|| {
        non_null(b, "bundle")?;
        non_null(out, "out")?;
        *out = into_c_string(format::bundle_to_json(&(*b).bundle));
        Ok(())
    })
}

/// # Safety
/// `b` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_bundle_free(b: *mut KcBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bundle_class_number(b: *const KcBundle, out: *mut usize) -> KcStatus {
    guard(|| {
        non_null(b, "bundle")?;
        non_null(out, "out")?;
        *out = lib(reconstruct::recover_class_number(&(*b).bundle))?;
        Ok(())
    })
}

/// Norm of `label` as a decimal string.
///
/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bundle_recover_norm(b: *const KcBundle, label: u32, out: *mut *mut c_char) -> KcStatus {
    guard(|| {
        non_null(b, "bundle")?;
        non_null(out, "out")?;
        *out = into_c_string(lib(reconstruct::recover_norm(&(*b).bundle, label))?.to_string());
        Ok(())
    })
}

/// Blind reconstruction; writes the report file as JSON. A `zeta_bound` of
/// 0 selects the default bound.
///
/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_reconstruct(b: *const KcBundle, zeta_bound: usize, out: *mut *mut c_char) -> KcStatus {
    guard(|| {
        non_null(b, "bundle")?;
        non_null(out, "out")?;
        let bound = (zeta_bound > 0).then_some(zeta_bound);
        let report = lib(reconstruct::reconstruct(&(*b).bundle, bound, TieBreak::First))?;
        *out = into_c_string(format::report_to_json(&report));
        Ok(())
    })
}

/// Round trip against the ground truth; writes the report as JSON and
/// whether every verdict passed.
///
/// # Safety
/// `f` must be a live field handle; `out` and `passed` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kc_roundtrip(
    f: *const KcField,
    prime_bound: u64,
    zeta_bound: usize,
    out: *mut *mut c_char,
    passed: *mut bool,
) -> KcStatus {
    guard(|| {
        non_null(f, "field")?;
        non_null(out, "out")?;
        non_null(passed, "passed")?;
        let report = lib(reconstruct::roundtrip(&(*f).field, prime_bound, zeta_bound, TieBreak::First))?;
        *passed = report.passed();
        *out = into_c_string(format::report_to_json(&report));
        Ok(())
    })
}
