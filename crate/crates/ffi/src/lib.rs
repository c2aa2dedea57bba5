//! C interface to `cep-core`.
//!
//! Proofs live behind an opaque `CepProof` handle. Every fallible call
//! returns a `CepStatus`; on failure `cep_last_error` describes what went
//! wrong on the calling thread. Strings handed out by the library are
//! NUL-terminated UTF-8 and must be released with `cep_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cep_core::automata::TracePairQuery;
use cep_core::decision::{decide_order, DecideOptions, OrderStatus};
use cep_core::proof::validate;
use cep_core::soundness::check_global_soundness;
use cep_core::{parse_proof_graph, report, Error, ProofGraph};

/// Result of a library call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CepStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The proof document could not be read.
    Parse = 3,
    /// A node or value name does not exist in the proof.
    UnknownName = 4,
    /// The analysis itself failed.
    Analysis = 5,
    /// An internal error; the library state is unaffected.
    Panic = 6,
}

/// Outcome of an order query.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CepOrder {
    Holds = 0,
    Fails = 1,
    NotApplicable = 2,
    Unknown = 3,
}

/// A parsed proof graph.
pub struct CepProof {
    inner: ProofGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CepStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } | Error::Structure { .. } | Error::Ordinal(_) => CepStatus::Parse,
            Error::UnknownNode(_) | Error::UnknownValue { .. } => CepStatus::UnknownName,
            _ => CepStatus::Analysis,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).expect("no interior NUL"));
    LAST_ERROR.with(|cell| *cell.borrow_mut() = message);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            CepStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(Some(message));
            status
        }
        Err(_) => {
            set_error(Some("internal error".into()));
            CepStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(CepStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(s, what)?;
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(CepStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn proof_ref<'a>(p: *const CepProof) -> Result<&'a ProofGraph, Failure> {
    non_null(p, "proof")?;
    Ok(&(*p).inner)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NUL").into_raw()
}

unsafe fn store<T>(out: *mut T, value: T) {
    if !out.is_null() {
        *out = value;
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cep_last_error() -> *const c_char {
    LAST_ERROR.with(|cell| cell.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a JSON proof document of `len` bytes into a new handle.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cep_proof_parse(data: *const u8, len: usize, out: *mut *mut CepProof) -> CepStatus {
    guard(|| {
        non_null(data, "data")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let bytes = std::slice::from_raw_parts(data, len);
        let inner = parse_proof_graph(bytes)?;
        *out = Box::into_raw(Box::new(CepProof { inner }));
        Ok(())
    })
}

/// Releases a proof handle. Null is ignored.
///
/// # Safety
/// `proof` must come from `cep_proof_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cep_proof_free(proof: *mut CepProof) {
    if !proof.is_null() {
        drop(Box::from_raw(proof));
    }
}

/// Number of nodes, 0 for a null handle.
///
/// # Safety
/// `proof` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cep_proof_node_count(proof: *const CepProof) -> usize {
    if proof.is_null() {
        0
    } else {
        (*proof).inner.len()
    }
}

/// Checks well-formedness. Either output may be null.
///
/// # Safety
/// `proof` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cep_proof_validate(
    proof: *const CepProof,
    out_clean: *mut bool,
    out_trace_injective: *mut bool,
) -> CepStatus {
    guard(|| {
        let r = validate(proof_ref(proof)?);
        store(out_clean, r.is_clean());
        store(out_trace_injective, r.trace_injective);
        Ok(())
    })
}

/// Checks global soundness. When `out_report` is not null it receives a
/// JSON report to be released with `cep_string_free`.
///
/// # Safety
/// `proof` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cep_soundness(
    proof: *const CepProof,
    out_sound: *mut bool,
    out_report: *mut *mut c_char,
) -> CepStatus {
    guard(|| {
        let p = proof_ref(proof)?;
        store(out_report, ptr::null_mut());
        let r = check_global_soundness(p);
        store(out_sound, r.sound);
        if !out_report.is_null() {
            *out_report = into_c_string(report::soundness(p, &r).to_string());
        }
        Ok(())
    })
}

/// Decides whether consequent value `con` is below antecedent value `ant`
/// at `node`, strictly when `strict` is set. `lag_cap` 0 picks the default
/// cap. When `out_report` is not null it receives a JSON report to be
/// released with `cep_string_free`.
///
/// # Safety
/// `proof` must be a live handle, the names NUL-terminated strings and
/// non-null outputs writable.
#[no_mangle]
pub unsafe extern "C" fn cep_decide_order(
    proof: *const CepProof,
    node: *const c_char,
    ant: *const c_char,
    con: *const c_char,
    strict: bool,
    lag_cap: u64,
    out_order: *mut CepOrder,
    out_report: *mut *mut c_char,
) -> CepStatus {
    guard(|| {
        let p = proof_ref(proof)?;
        store(out_report, ptr::null_mut());
        let q = TracePairQuery::resolve(p, text(node, "node")?, text(ant, "ant")?, text(con, "con")?)?;
        let options = DecideOptions {
            lag_cap: (lag_cap > 0).then_some(lag_cap),
            ..DecideOptions::default()
        };
        let v = decide_order(p, &q, strict, &options)?;
        store(
            out_order,
            match v.status {
                OrderStatus::Holds => CepOrder::Holds,
                OrderStatus::Fails => CepOrder::Fails,
                OrderStatus::NotApplicable => CepOrder::NotApplicable,
                OrderStatus::Unknown => CepOrder::Unknown,
            },
        );
        if !out_report.is_null() {
            *out_report = into_c_string(report::order(p, &q, &v).to_string());
        }
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
