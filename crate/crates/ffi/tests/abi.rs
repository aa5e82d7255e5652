use std::ffi::{CStr, CString};
use std::ptr;

use quiverlab_ffi::*;

const KRON: &str = "quiver kron\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n\
dim 1 = 2\ndim 2 = 2\nmat a = [[1, 0], [0, 1]]\nmat b = [[0, 1], [0, 0]]\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(ql_last_error_message()) }.to_str().unwrap().to_owned()
}

fn parse(text: &str) -> *mut QlRep {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ql_rep_parse(c.as_ptr(), &mut h) }, QlStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn parse_query_and_roundtrip() {
    let h = parse(KRON);
    unsafe {
        let mut d = 0usize;
        assert_eq!(ql_rep_end_dim(h, &mut d), QlStatus::Ok);
        assert_eq!(d, 2);
        let mut t = true;
        assert_eq!(ql_rep_is_transitive(h, &mut t), QlStatus::Ok);
        assert!(!t);
        let mut i = false;
        assert_eq!(ql_rep_is_indecomposable(h, 7, &mut i), QlStatus::Ok);
        assert!(i);
        let mut s = ptr::null_mut();
        assert_eq!(ql_rep_to_text(h, &mut s), QlStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        ql_string_free(s);
        let h2 = parse(&text);
        let mut d2 = 0usize;
        assert_eq!(ql_rep_end_dim(h2, &mut d2), QlStatus::Ok);
        assert_eq!(d2, 2);
        ql_rep_free(h2);
        ql_rep_free(h);
    }
}

#[test]
fn reflect_and_dual() {
    let h = parse(KRON);
    unsafe {
        let v = CString::new("2").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(ql_rep_reflect(h, v.as_ptr(), QlDirection::Plus, &mut r), QlStatus::Ok);
        let mut d = 0usize;
        assert_eq!(ql_rep_end_dim(r, &mut d), QlStatus::Ok);
        assert_eq!(d, 2);
        let mut bad = ptr::null_mut();
        assert_eq!(ql_rep_reflect(h, v.as_ptr(), QlDirection::Minus, &mut bad), QlStatus::Precondition);
        assert!(last_error().contains("source"));
        assert!(bad.is_null());
        let mut du = ptr::null_mut();
        assert_eq!(ql_rep_dual(h, &mut du), QlStatus::Ok);
        assert_eq!(ql_rep_end_dim(du, &mut d), QlStatus::Ok);
        assert_eq!(d, 2);
        ql_rep_free(du);
        ql_rep_free(r);
        ql_rep_free(h);
    }
}

#[test]
fn builder() {
    let f = CString::new("e7tilde").unwrap();
    let op = CString::new("jordan:2").unwrap();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ql_build_extended_dynkin(f.as_ptr(), op.as_ptr(), &mut h), QlStatus::Ok);
        let mut d = 0usize;
        assert_eq!(ql_rep_end_dim(h, &mut d), QlStatus::Ok);
        assert_eq!(d, 2);
        ql_rep_free(h);
        let bad = CString::new("z9").unwrap();
        assert_eq!(ql_build_extended_dynkin(bad.as_ptr(), op.as_ptr(), &mut h), QlStatus::Parse);
        assert!(!last_error().is_empty());
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ql_rep_parse(ptr::null(), &mut h), QlStatus::NullPointer);
        let bad = CString::new("quiver q\nvertex 1\narrow a: 1 -> 9\n").unwrap();
        assert_eq!(ql_rep_parse(bad.as_ptr(), &mut h), QlStatus::Parse);
        assert!(last_error().contains('9'));
        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(ql_rep_parse(invalid.as_ptr().cast(), &mut h), QlStatus::InvalidUtf8);
        let mut d = 0usize;
        assert_eq!(ql_rep_end_dim(ptr::null(), &mut d), QlStatus::NullPointer);
        let k = parse(KRON);
        assert_eq!(ql_rep_end_dim(k, ptr::null_mut()), QlStatus::NullPointer);
        assert_eq!(ql_rep_end_dim(k, &mut d), QlStatus::Ok);
        assert!(last_error().is_empty());
        ql_rep_free(k);
        ql_rep_free(ptr::null_mut());
        ql_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/quiverlab.h")).unwrap();
    for sym in [
        "ql_rep_parse",
        "ql_rep_free",
        "ql_rep_to_text",
        "ql_string_free",
        "ql_rep_end_dim",
        "ql_rep_is_transitive",
        "ql_rep_is_indecomposable",
        "ql_rep_reflect",
        "ql_rep_dual",
        "ql_build_extended_dynkin",
        "ql_last_error_message",
        "QL_STATUS_OK",
        "typedef struct QlRep QlRep",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}
