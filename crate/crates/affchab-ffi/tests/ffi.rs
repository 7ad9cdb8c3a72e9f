use std::ffi::{CStr, CString};
use std::ptr;

use affchab_ffi::*;

fn fixture(name: &str) -> CString {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../affchab/fixtures").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn parse(name: &str) -> *mut AffchabProblem {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { affchab_problem_parse(fixture(name).as_ptr(), &mut h) }, AffchabStatus::Ok);
    assert!(!h.is_null());
    h
}

fn report_json(r: *const AffchabReport) -> serde_json::Value {
    let s = unsafe { CStr::from_ptr(affchab_report_json(r)) }.to_str().unwrap();
    serde_json::from_str(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(affchab_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn solve_one_type_of_the_sextic() {
    let h = parse("sextic.json");
    let mut r = ptr::null_mut();
    let st = unsafe { affchab_solve(h, 0, 0, 0, &mut r) };
    assert_eq!(st, AffchabStatus::Ok);
    assert_eq!(unsafe { affchab_report_outcome(r) }, 0);
    let v = report_json(r);
    assert_eq!(v["status"], "complete");
    assert_eq!(v["types"][0]["candidates"].as_array().unwrap().len(), 10);
    unsafe {
        affchab_report_free(r);
        affchab_problem_free(h);
    }
}

#[test]
fn partial_and_failed_runs() {
    let h = parse("superelliptic.json");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { affchab_solve(h, 0, 0, 2, &mut r) }, AffchabStatus::Partial);
    assert_eq!(unsafe { affchab_report_outcome(r) }, 2);
    unsafe { affchab_report_free(r) };

    // 11 is not 1 mod 3; the report still carries the details
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { affchab_solve(h, 11, 0, -1, &mut r) }, AffchabStatus::BadReduction);
    assert!(last_error().contains("1 mod 3"));
    assert_eq!(unsafe { affchab_report_outcome(r) }, 1);
    assert_eq!(report_json(r)["error"]["kind"], "BadReduction");
    unsafe { affchab_report_free(r) };

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { affchab_verify(h, 0, 0, &mut r) }, AffchabStatus::Ok);
    assert_eq!(report_json(r)["pass"], true);
    unsafe {
        affchab_report_free(r);
        affchab_problem_free(h);
    }
}

#[test]
fn bad_input_gives_codes_and_messages() {
    let mut h = ptr::null_mut();
    let bad = CString::new("{\"schema\": 1}").unwrap();
    assert_eq!(unsafe { affchab_problem_parse(bad.as_ptr(), &mut h) }, AffchabStatus::Invalid);
    assert!(h.is_null());
    assert!(last_error().contains("problem file"));

    assert_eq!(unsafe { affchab_problem_parse(ptr::null(), &mut h) }, AffchabStatus::NullArgument);
    assert_eq!(unsafe { affchab_problem_parse(bad.as_ptr(), ptr::null_mut()) }, AffchabStatus::NullArgument);
    let latin1 = [0xffu8, 0];
    assert_eq!(unsafe { affchab_problem_parse(latin1.as_ptr().cast(), &mut h) }, AffchabStatus::InvalidUtf8);

    let missing = CString::new("/nonexistent/problem.json").unwrap();
    assert_eq!(unsafe { affchab_problem_read(missing.as_ptr(), &mut h) }, AffchabStatus::Invalid);
    assert!(last_error().contains("/nonexistent/problem.json"));

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { affchab_solve(ptr::null(), 0, 0, -1, &mut r) }, AffchabStatus::NullArgument);
    assert!(r.is_null());
    assert_eq!(unsafe { affchab_report_outcome(ptr::null()) }, 1);
    assert!(unsafe { affchab_report_json(ptr::null()) }.is_null());
    unsafe {
        affchab_problem_free(ptr::null_mut());
        affchab_report_free(ptr::null_mut());
    }
}

#[test]
fn status_names_round_trip() {
    let name = |s: i32| unsafe { CStr::from_ptr(affchab_status_name(s)) }.to_str().unwrap().to_string();
    assert_eq!(name(AffchabStatus::BadReduction as i32), "BadReduction");
    assert_eq!(name(AffchabStatus::Partial as i32), "Partial");
    assert_eq!(name(-99), "Unknown");
    for k in -27..=-10 {
        assert_ne!(name(k), "Unknown", "{k}");
    }
    let v = unsafe { CStr::from_ptr(affchab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
