//! C interface to heapkit.
//!
//! Posets and periodic heaps live behind opaque handles. Reports come back
//! as JSON strings owned by the caller, to be released with
//! `heapkit_string_free`. Every function returns a [`HeapkitStatus`]; on
//! anything but `HEAPKIT_STATUS_OK` or `HEAPKIT_STATUS_NEGATIVE`,
//! `heapkit_last_error` describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use heapkit::axioms::{classify, is_d_complete};
use heapkit::heap_periodic::PeriodicHeap;
use heapkit::io::{self, FilterDoc};
use heapkit::poset::ColoredPoset;
use heapkit::rep::{carries_upper_minuscule, RepError};
use heapkit::weyl::solve_lambda;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeapkitStatus {
    Ok = 0,
    /// The call succeeded and the verdict is negative; the output JSON holds
    /// the witness.
    Negative = 1,
    InvalidInput = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    CapExceeded = 5,
    Panic = 6,
}

/// A validated finite colored poset.
pub struct HeapkitPoset {
    inner: ColoredPoset,
}

/// A validated periodic full heap.
pub struct HeapkitHeap {
    inner: Arc<PeriodicHeap>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: HeapkitStatus, msg: impl Into<String>) -> HeapkitStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HeapkitStatus) -> HeapkitStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(HeapkitStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, HeapkitStatus> {
    if s.is_null() {
        return Err(fail(HeapkitStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(HeapkitStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> HeapkitStatus {
    let text = serde_json::to_string(value).expect("report types serialize");
    *out = CString::new(text).expect("JSON has no nul bytes").into_raw();
    HeapkitStatus::Ok
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(HeapkitStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next heapkit call on the same thread.
#[no_mangle]
pub extern "C" fn heapkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn heapkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a poset document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn heapkit_poset_from_json(json: *const c_char, out: *mut *mut HeapkitPoset) -> HeapkitStatus {
    guard(|| {
        non_null!(out);
        let text = try_ffi!(read_str(json));
        match io::poset_from_str("poset", text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(HeapkitPoset { inner }));
                HeapkitStatus::Ok
            }
            Err(e) => fail(HeapkitStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be null or a handle from `heapkit_poset_from_json`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn heapkit_poset_free(p: *mut HeapkitPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live poset handle.
#[no_mangle]
pub unsafe extern "C" fn heapkit_poset_len(p: *const HeapkitPoset) -> usize {
    p.as_ref().map_or(0, |p| p.inner.len())
}

/// Writes whether the poset is d-complete.
///
/// # Safety
/// `p` must be a live poset handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_is_d_complete(p: *const HeapkitPoset, out: *mut bool) -> HeapkitStatus {
    guard(|| {
        non_null!(p, out);
        *out = is_d_complete(&(*p).inner);
        HeapkitStatus::Ok
    })
}

/// Classification JSON. Returns `HEAPKIT_STATUS_NEGATIVE` when the poset is
/// not d-complete; the JSON is written either way.
///
/// # Safety
/// `p` must be a live poset handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_classify(p: *const HeapkitPoset, out: *mut *mut c_char) -> HeapkitStatus {
    guard(|| {
        non_null!(p, out);
        let c = classify(&(*p).inner);
        write_json(out, &serde_json::to_value(&c).expect("serialize"));
        if c.is_d_complete {
            HeapkitStatus::Ok
        } else {
            HeapkitStatus::Negative
        }
    })
}

/// Canonical key as lowercase hex.
///
/// # Safety
/// `p` must be a live poset handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_canonical_key(p: *const HeapkitPoset, out: *mut *mut c_char) -> HeapkitStatus {
    guard(|| {
        non_null!(p, out);
        write_json(out, &serde_json::Value::String((*p).inner.canonical_key_hex()))
    })
}

/// Representation certificate JSON; negative when the split space carries
/// no upper minuscule representation. `cap` bounds the split count.
///
/// # Safety
/// `p` must be a live poset handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_rep_verify(p: *const HeapkitPoset, cap: usize, out: *mut *mut c_char) -> HeapkitStatus {
    guard(|| {
        non_null!(p, out);
        match carries_upper_minuscule(&(*p).inner, cap) {
            Ok(cert) => {
                write_json(out, &serde_json::to_value(&cert).expect("serialize"));
                if cert.carries {
                    HeapkitStatus::Ok
                } else {
                    HeapkitStatus::Negative
                }
            }
            Err(e @ RepError::CapExceeded(_)) => fail(HeapkitStatus::CapExceeded, e.to_string()),
            Err(e) => fail(HeapkitStatus::InvalidInput, e.to_string()),
        }
    })
}

/// The least dominant weight as a JSON array in diagram color order.
///
/// # Safety
/// `p` must be a live poset handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_weyl_lambda(p: *const HeapkitPoset, out: *mut *mut c_char) -> HeapkitStatus {
    guard(|| {
        non_null!(p, out);
        match solve_lambda(&(*p).inner) {
            Ok(l) => write_json(out, &serde_json::json!(l.coords)),
            Err(e) => {
                write_json(out, &serde_json::json!({ "error": e.to_string() }));
                fail(HeapkitStatus::Negative, e.to_string())
            }
        }
    })
}

/// `"cycle:N"` or `"alternating_a1"`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_heap_builtin(name: *const c_char, out: *mut *mut HeapkitHeap) -> HeapkitStatus {
    guard(|| {
        non_null!(out);
        let name = try_ffi!(read_str(name));
        match PeriodicHeap::builtin(name) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(HeapkitHeap { inner: Arc::new(h) }));
                HeapkitStatus::Ok
            }
            Err(e) => fail(HeapkitStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Parses a heap document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_heap_from_json(json: *const c_char, out: *mut *mut HeapkitHeap) -> HeapkitStatus {
    guard(|| {
        non_null!(out);
        let text = try_ffi!(read_str(json));
        let built = io::parse::<io::HeapDoc>("heap", text).and_then(|doc| doc.build("heap"));
        match built {
            Ok(h) => {
                *out = Box::into_raw(Box::new(HeapkitHeap { inner: Arc::new(h) }));
                HeapkitStatus::Ok
            }
            Err(e) => fail(HeapkitStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `h` must be null or a live heap handle.
#[no_mangle]
pub unsafe extern "C" fn heapkit_heap_free(h: *mut HeapkitHeap) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Infinite-axiom report for a filter document; negative when the filter
/// is not d-complete.
///
/// # Safety
/// `h` must be a live heap handle, `filter_json` a nul-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn heapkit_filter_check(
    h: *const HeapkitHeap,
    filter_json: *const c_char,
    out: *mut *mut c_char,
) -> HeapkitStatus {
    guard(|| {
        non_null!(h, out);
        let text = try_ffi!(read_str(filter_json));
        let filter = io::parse::<FilterDoc>("filter", text).and_then(|doc| doc.build("filter", (*h).inner.clone()));
        match filter {
            Ok(f) => {
                let report = f.check_infinite_axioms();
                write_json(out, &serde_json::to_value(&report).expect("serialize"));
                if report.d_complete {
                    HeapkitStatus::Ok
                } else {
                    HeapkitStatus::Negative
                }
            }
            Err(e) => fail(HeapkitStatus::InvalidInput, e.to_string()),
        }
    })
}
