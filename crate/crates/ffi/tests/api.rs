use std::ffi::CStr;
use std::ptr;

use toricsod_ffi::*;

fn weighted(w: [i64; 3]) -> *mut TsFan {
    let mut fan = ptr::null_mut();
    assert_eq!(unsafe { ts_fan_weighted(w[0], w[1], w[2], &mut fan) }, TsStatus::Ok);
    fan
}

#[test]
fn brauer_order_of_p2_mod_mu3() {
    let rays = [1i64, 1, -2, 1, 1, -2];
    let mut fan = ptr::null_mut();
    unsafe {
        assert_eq!(ts_fan_new(rays.as_ptr(), 3, &mut fan), TsStatus::Ok);
        let mut order = 0u64;
        assert_eq!(ts_fan_brauer_order(fan, &mut order), TsStatus::Ok);
        assert_eq!(order, 3);
        let mut untwisted = true;
        assert_eq!(ts_fan_is_untwisted(fan, &mut untwisted), TsStatus::Ok);
        assert!(!untwisted);
        ts_fan_free(fan);
    }
}

#[test]
fn invalid_fan_sets_message() {
    let rays = [2i64, 0, 0, 1, -1, -1];
    let mut fan = ptr::null_mut();
    let status = unsafe { ts_fan_new(rays.as_ptr(), 3, &mut fan) };
    assert_eq!(status, TsStatus::InvalidFan);
    assert!(fan.is_null());
    let msg = unsafe { CStr::from_ptr(ts_last_error()) }.to_str().unwrap();
    assert!(msg.contains("not primitive"), "{msg}");
}

#[test]
fn null_arguments() {
    let mut n = 0usize;
    unsafe {
        assert_eq!(ts_fan_ray_count(ptr::null(), &mut n), TsStatus::NullPointer);
        assert_eq!(ts_fan_new(ptr::null(), 3, ptr::null_mut()), TsStatus::NullPointer);
        ts_fan_free(ptr::null_mut());
        ts_string_free(ptr::null_mut());
    }
}

#[test]
fn kk_dimensions() {
    let mut n = 0usize;
    unsafe {
        assert_eq!(ts_kk_dimension(7, 5, &mut n), TsStatus::Ok);
        assert_eq!(n, 7);
        assert_eq!(ts_kk_dimension(11, 8, &mut n), TsStatus::Ok);
        assert_eq!(n, 11);
        assert_eq!(ts_kk_dimension(6, 4, &mut n), TsStatus::InvalidArgument);
    }
    assert!(!ts_last_error().is_null());
}

#[test]
fn sod_report_json() {
    let fan = weighted([1, 2, 3]);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ts_report_json(fan, TsReportKind::Sod, 0, false, &mut s), TsStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        ts_string_free(s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let names: Vec<&str> = v["blocks"].as_array().unwrap().iter().map(|b| b["algebra"]["name"].as_str().unwrap()).collect();
        assert_eq!(names, ["k", "k[z]/z^2", "k[z]/z^3"]);
        assert_eq!(ts_report_json(fan, TsReportKind::Analyze, 3, false, &mut s), TsStatus::InvalidArgument);
        ts_fan_free(fan);
    }
}

#[test]
fn generators_need_trivial_brauer_group() {
    let rays = [1i64, 1, -1, 1, -1, -1, 1, -1];
    let mut fan = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ts_fan_new(rays.as_ptr(), 4, &mut fan), TsStatus::Ok);
        assert_eq!(ts_report_json(fan, TsReportKind::Generators, 0, false, &mut s), TsStatus::Obstruction);
        ts_fan_free(fan);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/toricsod.h")).unwrap();
    for name in ["ts_fan_new", "ts_fan_weighted", "ts_fan_free", "ts_report_json", "ts_string_free", "ts_last_error", "TS_STATUS_OK", "typedef struct TsFan TsFan"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
