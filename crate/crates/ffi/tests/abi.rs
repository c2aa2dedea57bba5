use std::ffi::{CStr, CString};
use std::ptr;

use cep_ffi::*;

const LOOP2: &str = include_str!("../../core/fixtures/loop2.json");
const UNSOUND1: &str = include_str!("../../core/fixtures/unsound1.json");

fn parse(src: &str) -> *mut CepProof {
    let mut out = ptr::null_mut();
    let status = unsafe { cep_proof_parse(src.as_ptr(), src.len(), &mut out) };
    assert_eq!(status, CepStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> Option<String> {
    let p = cep_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { cep_string_free(s) };
    out
}

fn order(proof: *const CepProof, strict: bool) -> (CepStatus, CepOrder, Option<String>) {
    let (n, a, c) = (CString::new("n0").unwrap(), CString::new("a").unwrap(), CString::new("c").unwrap());
    let mut verdict = CepOrder::Unknown;
    let mut report = ptr::null_mut();
    let status = unsafe { cep_decide_order(proof, n.as_ptr(), a.as_ptr(), c.as_ptr(), strict, 0, &mut verdict, &mut report) };
    let report = (!report.is_null()).then(|| take_string(report));
    (status, verdict, report)
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(cep_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn decide_order_on_loop2() {
    let p = parse(LOOP2);
    assert_eq!(unsafe { cep_proof_node_count(p) }, 3);
    let (status, verdict, report) = order(p, false);
    assert_eq!((status, verdict), (CepStatus::Ok, CepOrder::Holds));
    assert!(last_error().is_none());
    let doc: serde_json::Value = serde_json::from_str(&report.unwrap()).unwrap();
    assert_eq!(doc["status"], "HOLDS");
    let (_, verdict, report) = order(p, true);
    assert_eq!(verdict, CepOrder::Fails);
    assert!(report.unwrap().contains("\"witness\":{\"path\":[\"n0\",\"n1\",\"n2\"]"));
    unsafe { cep_proof_free(p) };
}

#[test]
fn validate_and_soundness() {
    let p = parse(UNSOUND1);
    let (mut clean, mut injective) = (false, false);
    assert_eq!(unsafe { cep_proof_validate(p, &mut clean, &mut injective) }, CepStatus::Ok);
    assert!(clean && injective);
    let mut sound = true;
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { cep_soundness(p, &mut sound, &mut report) }, CepStatus::Ok);
    assert!(!sound);
    assert!(take_string(report).contains("\"cycle\":[\"n0\",\"n0\"]"));
    let (status, verdict, _) = order(p, false);
    assert_eq!((status, verdict), (CepStatus::Ok, CepOrder::NotApplicable));
    // outputs are optional
    assert_eq!(unsafe { cep_soundness(p, ptr::null_mut(), ptr::null_mut()) }, CepStatus::Ok);
    unsafe { cep_proof_free(p) };
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = b"{ nope";
    assert_eq!(unsafe { cep_proof_parse(bad.as_ptr(), bad.len(), &mut out) }, CepStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().unwrap().contains("syntax"));
    assert_eq!(unsafe { cep_proof_parse(ptr::null(), 0, &mut out) }, CepStatus::NullArgument);

    let p = parse(LOOP2);
    assert!(last_error().is_none());
    let (n, a, c) = (CString::new("n9").unwrap(), CString::new("a").unwrap(), CString::new("c").unwrap());
    let mut verdict = CepOrder::Holds;
    let status = unsafe { cep_decide_order(p, n.as_ptr(), a.as_ptr(), c.as_ptr(), false, 0, &mut verdict, ptr::null_mut()) };
    assert_eq!(status, CepStatus::UnknownName);
    assert!(last_error().unwrap().contains("n9"));
    let status = unsafe { cep_decide_order(p, ptr::null(), a.as_ptr(), c.as_ptr(), false, 0, &mut verdict, ptr::null_mut()) };
    assert_eq!(status, CepStatus::NullArgument);
    let bad_utf8 = [0xffu8, 0];
    let status = unsafe {
        cep_decide_order(p, bad_utf8.as_ptr().cast(), a.as_ptr(), c.as_ptr(), false, 0, &mut verdict, ptr::null_mut())
    };
    assert_eq!(status, CepStatus::InvalidUtf8);
    assert_eq!(unsafe { cep_proof_validate(ptr::null(), ptr::null_mut(), ptr::null_mut()) }, CepStatus::NullArgument);
    assert_eq!(unsafe { cep_proof_node_count(ptr::null()) }, 0);
    unsafe {
        cep_proof_free(p);
        cep_proof_free(ptr::null_mut());
        cep_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/cep.h");
    for name in [
        "cep_version",
        "cep_last_error",
        "cep_proof_parse",
        "cep_proof_free",
        "cep_proof_node_count",
        "cep_proof_validate",
        "cep_soundness",
        "cep_decide_order",
        "cep_string_free",
        "typedef struct CepProof CepProof",
        "CEP_STATUS_UNKNOWN_NAME = 4",
        "CEP_ORDER_NOT_APPLICABLE = 2",
    ] {
        assert!(header.contains(name), "{name} missing from cep.h");
    }
}
