use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fracdiff_ffi::*;

fn last_error() -> String {
    let p = fd_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { fd_string_free(p) };
    s
}

#[test]
fn density_handle_round_trip() {
    let nu = CString::new("1").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { fd_density_new(nu.as_ptr(), 1.0, 1.0, &mut h) }, FdStatus::Ok);
    assert!(!h.is_null());
    let mut r = FdEvalResult { value: 0.0, abs_err: 0.0, method: FdMethod::Auto };
    assert_eq!(unsafe { fd_density_eval(h, 0.5, FdMethod::Auto, &mut r) }, FdStatus::Ok);
    // Heat kernel with variance 2.
    let want = (-0.25f64 * 0.5 * 0.5).exp() / (4.0 * std::f64::consts::PI).sqrt();
    assert!((r.value - want).abs() < 1e-14);
    assert_eq!(r.method, FdMethod::ClosedForm);

    let xs = [-1.0, 0.0, 1.0];
    let mut vals = [0.0; 3];
    let mut errs = [0.0; 3];
    let st = unsafe { fd_density_eval_many(h, xs.as_ptr(), 3, vals.as_mut_ptr(), errs.as_mut_ptr()) };
    assert_eq!(st, FdStatus::Ok);
    assert_eq!(vals[0], vals[2]);
    let mut mode = -1.0;
    assert_eq!(unsafe { fd_density_mode(h, &mut mode) }, FdStatus::Ok);
    assert_eq!(mode, 0.0);
    unsafe { fd_density_free(h) };
    unsafe { fd_density_free(ptr::null_mut()) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut h = ptr::null_mut();
    let wave = CString::new("2").unwrap();
    assert_eq!(unsafe { fd_density_new(wave.as_ptr(), 1.0, 1.0, &mut h) }, FdStatus::InvalidParams);
    assert!(h.is_null());
    assert!(last_error().contains("wave"));

    assert_eq!(unsafe { fd_density_new(ptr::null(), 1.0, 1.0, &mut h) }, FdStatus::NullPointer);
    let junk = CString::new("x/y").unwrap();
    assert_eq!(unsafe { fd_density_new(junk.as_ptr(), 1.0, 1.0, &mut h) }, FdStatus::InvalidParams);

    let half = CString::new("1/2").unwrap();
    assert_eq!(unsafe { fd_density_new(half.as_ptr(), 1.0, 1.0, &mut h) }, FdStatus::Ok);
    let mut r = FdEvalResult { value: 0.0, abs_err: 0.0, method: FdMethod::Auto };
    assert_eq!(unsafe { fd_density_eval(h, 40.0, FdMethod::Series, &mut r) }, FdStatus::OutOfWindow);
    assert_eq!(unsafe { fd_density_eval(h, 0.0, FdMethod::Auto, ptr::null_mut()) }, FdStatus::NullPointer);
    unsafe { fd_density_free(h) };

    let mut m = 0.0;
    assert_eq!(unsafe { fd_even_moment(1, 0, 1.0, &mut m) }, FdStatus::InvalidParams);
}

#[test]
fn sampling_is_reproducible() {
    let draw = |seed| {
        let mut rng = ptr::null_mut();
        assert_eq!(unsafe { fd_rng_new(seed, 0, &mut rng) }, FdStatus::Ok);
        let mut xs = [0.0; 8];
        for x in &mut xs {
            assert_eq!(unsafe { fd_sample_iterated(rng, 2, 1.0, x) }, FdStatus::Ok);
        }
        let mut a = 0.0;
        assert_eq!(unsafe { fd_sample_airy(rng, 1.0, 1.0, &mut a) }, FdStatus::Ok);
        unsafe { fd_rng_free(rng) };
        (xs, a)
    };
    assert_eq!(draw(3), draw(3));
    assert_ne!(draw(3), draw(4));
}

#[test]
fn functionals_and_version() {
    let mut v = 0.0;
    assert_eq!(unsafe { fd_max_density(1.0, 1.0, &mut v) }, FdStatus::Ok);
    assert!((v - 0.465816985075490953).abs() < 1e-9);
    assert_eq!(unsafe { fd_sojourn_density(1.0, 1.0, &mut v) }, FdStatus::Ok);
    assert!((v - 0.448258736187802473).abs() < 1e-9);
    assert_eq!(unsafe { fd_even_moment(1, 1, 1.0, &mut v) }, FdStatus::Ok);
    assert!((v - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-14);
    assert!((fd_nested_lambda(1) - 2f64.powf(-0.75)).abs() < 1e-15);
    let ver = unsafe { CStr::from_ptr(fd_version()) }.to_str().unwrap();
    assert_eq!(ver, env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_through_the_abi() {
    let name = CString::new("fourier").unwrap();
    let mut d = -1.0;
    assert_eq!(unsafe { fd_verify(name.as_ptr(), true, &mut d) }, FdStatus::Ok);
    assert!((0.0..1e-5).contains(&d));
    let name = CString::new("no-such-identity").unwrap();
    assert_eq!(unsafe { fd_verify(name.as_ptr(), true, ptr::null_mut()) }, FdStatus::InvalidParams);
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "fracdiff.h"

int main(void) {
    FdDensity *h = NULL;
    if (fd_density_new("2/3", 1.0, 1.0, &h) != FD_STATUS_OK) return 10;
    FdEvalResult r;
    if (fd_density_eval(h, 0.7, FD_METHOD_AUTO, &r) != FD_STATUS_OK) return 11;
    fd_density_free(h);
    if (fd_density_new("2", 1.0, 1.0, &h) != FD_STATUS_INVALID_PARAMS) return 12;
    char *msg = fd_last_error_message();
    if (msg == NULL) return 13;
    fd_string_free(msg);
    printf("%.17g %d\n", r.value, (int)r.method);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libfracdiff_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut parts = text.split_whitespace();
    let value: f64 = parts.next().unwrap().parse().unwrap();
    let method: i32 = parts.next().unwrap().parse().unwrap();
    // Rust side, same point.
    let nu = CString::new("2/3").unwrap();
    let mut h = ptr::null_mut();
    let mut r = FdEvalResult { value: 0.0, abs_err: 0.0, method: FdMethod::Auto };
    unsafe {
        fd_density_new(nu.as_ptr(), 1.0, 1.0, &mut h);
        fd_density_eval(h, 0.7, FdMethod::Auto, &mut r);
        fd_density_free(h);
    }
    assert_eq!(value, r.value);
    assert_eq!(method, r.method as i32);
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
