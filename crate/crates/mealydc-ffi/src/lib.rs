//! C interface to the mealydc workbench.
//!
//! Objects cross the boundary as JSON documents in the same schema the
//! CLI uses; handles returned from constructors are opaque and must be
//! released with the matching `_free` function. Strings returned through
//! `char**` out-parameters must be released with [`mdc_string_free`].
//! Every function is panic-safe: a caught panic reports
//! `MDC_STATUS_INTERNAL_ERROR` instead of unwinding across the boundary.

// pointer contracts are stated on each function where the header shows them
#![allow(clippy::missing_safety_doc)]

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mealydc::doc::{parse_document_str, Document};
use mealydc::mealy::{loose_compose, MealyMachine};
use mealydc::monad::{check_monad, enumerate_monads, DoubleMonad};
use mealydc::verdict::{Error, Verdict};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdcStatus {
    /// The operation succeeded; for law checks, the laws hold.
    MdcStatusOk = 0,
    /// The laws were checked and fail; the report carries a witness.
    MdcStatusViolation = 1,
    /// Malformed JSON, a bad document, or mismatched boundaries.
    MdcStatusInvalidInput = 2,
    /// A required pointer argument was null.
    MdcStatusNullPointer = 3,
    /// The requested enumeration exceeds the candidate budget.
    MdcStatusBudgetExceeded = 4,
    /// An internal invariant failed; the handle is still valid.
    MdcStatusInternalError = 5,
}

use MdcStatus::*;

/// Opaque handle to a Mealy machine.
pub struct MdcMachine {
    inner: MealyMachine,
}

/// Opaque handle to a monad in the double category.
pub struct MdcMonad {
    inner: DoubleMonad,
}

fn status_of(e: &Error) -> MdcStatus {
    match e {
        Error::Budget { .. } => MdcStatusBudgetExceeded,
        _ => MdcStatusInvalidInput,
    }
}

/// Reads a NUL-terminated UTF-8 string; None on null or bad encoding.
unsafe fn str_in<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

fn string_out(s: String, out: *mut *mut c_char) -> MdcStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            MdcStatusOk
        }
        Err(_) => MdcStatusInternalError,
    }
}

fn report_json(v: &Verdict) -> String {
    let mut r = serde_json::Map::new();
    r.insert("pass".into(), v.pass.into());
    if let Some(law) = &v.law {
        r.insert("axiom".into(), law.clone().into());
    }
    if let Some(w) = &v.witness {
        r.insert("witness".into(), w.clone());
    }
    serde_json::Value::Object(r).to_string()
}

fn guarded(body: impl FnOnce() -> MdcStatus) -> MdcStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(MdcStatusInternalError)
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mdc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mdc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a machine document. On success writes a new handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_from_json(
    json: *const c_char,
    out: *mut *mut MdcMachine,
) -> MdcStatus {
    if out.is_null() {
        return MdcStatusNullPointer;
    }
    let Some(text) = str_in(json) else {
        return if json.is_null() {
            MdcStatusNullPointer
        } else {
            MdcStatusInvalidInput
        };
    };
    guarded(
        || match parse_document_str(text).and_then(Document::into_machine) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(MdcMachine { inner: m }));
                MdcStatusOk
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Serializes a machine back to its JSON document.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_to_json(
    machine: *const MdcMachine,
    out: *mut *mut c_char,
) -> MdcStatus {
    if machine.is_null() || out.is_null() {
        return MdcStatusNullPointer;
    }
    guarded(|| {
        let doc = Document::Machine((*machine).inner.clone());
        string_out(doc.to_value().to_string(), out)
    })
}

/// Releases a machine handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_free(machine: *mut MdcMachine) {
    if !machine.is_null() {
        drop(Box::from_raw(machine));
    }
}

/// Input alphabet size; 0 when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_input_size(machine: *const MdcMachine) -> usize {
    if machine.is_null() {
        return 0;
    }
    (*machine).inner.input().size()
}

/// Output alphabet size; 0 when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_output_size(machine: *const MdcMachine) -> usize {
    if machine.is_null() {
        return 0;
    }
    (*machine).inner.output().size()
}

/// State count; 0 when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_state_count(machine: *const MdcMachine) -> usize {
    if machine.is_null() {
        return 0;
    }
    (*machine).inner.states().size()
}

/// Runs a machine from `state` over `word` (length `len`). Writes the
/// output word to `out_word`, which must hold `len` entries, and the
/// final state to `out_state`. `word` and `out_word` may be null when
/// `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_run(
    machine: *const MdcMachine,
    state: usize,
    word: *const usize,
    len: usize,
    out_word: *mut usize,
    out_state: *mut usize,
) -> MdcStatus {
    if machine.is_null()
        || out_state.is_null()
        || (len > 0 && (word.is_null() || out_word.is_null()))
    {
        return MdcStatusNullPointer;
    }
    guarded(|| {
        let w = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(word, len)
        };
        match (*machine).inner.run(state, w) {
            Ok((out, e)) => {
                if len > 0 {
                    std::ptr::copy_nonoverlapping(out.as_ptr(), out_word, len);
                }
                *out_state = e;
                MdcStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Cascade composition: the output of `first` feeds `second`. Fails with
/// `MDC_STATUS_INVALID_INPUT` when the boundaries do not match.
#[no_mangle]
pub unsafe extern "C" fn mdc_machine_compose(
    first: *const MdcMachine,
    second: *const MdcMachine,
    out: *mut *mut MdcMachine,
) -> MdcStatus {
    if first.is_null() || second.is_null() || out.is_null() {
        return MdcStatusNullPointer;
    }
    guarded(|| match loose_compose(&(*first).inner, &(*second).inner) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(MdcMachine { inner: m }));
            MdcStatusOk
        }
        Err(e) => status_of(&e),
    })
}

/// Parses a monad document. On success writes a new handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn mdc_monad_from_json(
    json: *const c_char,
    out: *mut *mut MdcMonad,
) -> MdcStatus {
    if out.is_null() {
        return MdcStatusNullPointer;
    }
    let Some(text) = str_in(json) else {
        return if json.is_null() {
            MdcStatusNullPointer
        } else {
            MdcStatusInvalidInput
        };
    };
    guarded(
        || match parse_document_str(text).and_then(Document::into_monad) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(MdcMonad { inner: m }));
                MdcStatusOk
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Releases a monad handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mdc_monad_free(monad: *mut MdcMonad) {
    if !monad.is_null() {
        drop(Box::from_raw(monad));
    }
}

/// Checks the monad laws. Returns `MDC_STATUS_OK` when they hold and
/// `MDC_STATUS_VIOLATION` otherwise; when `report` is non-null a JSON
/// report with the failing axiom and witness is written to it either way.
#[no_mangle]
pub unsafe extern "C" fn mdc_monad_check(
    monad: *const MdcMonad,
    report: *mut *mut c_char,
) -> MdcStatus {
    if monad.is_null() {
        return MdcStatusNullPointer;
    }
    guarded(|| {
        let v = check_monad(&(*monad).inner);
        if !report.is_null() {
            let s = string_out(report_json(&v), report);
            if s != MdcStatusOk {
                return s;
            }
        }
        if v.pass {
            MdcStatusOk
        } else {
            MdcStatusViolation
        }
    })
}

/// Counts the monads on the identity machine profile with the given
/// alphabet and state sizes. Fails with `MDC_STATUS_BUDGET_EXCEEDED`
/// when the candidate space is too large to enumerate.
#[no_mangle]
pub unsafe extern "C" fn mdc_enumerate_monads_count(
    alphabet: usize,
    states: usize,
    out: *mut usize,
) -> MdcStatus {
    if out.is_null() {
        return MdcStatusNullPointer;
    }
    guarded(|| match enumerate_monads(alphabet, states) {
        Ok(monads) => {
            *out = monads.len();
            MdcStatusOk
        }
        Err(e) => status_of(&e),
    })
}
