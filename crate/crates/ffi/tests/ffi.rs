use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use adelia_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(adelia_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn field_handles() {
    let mut k = ptr::null_mut();
    unsafe {
        assert_eq!(adelia_field_new(9, &mut k), AdeliaStatus::Ok);
        assert_eq!(adelia_field_order(k), 9);
        adelia_field_free(k);
        assert_eq!(adelia_field_new(10, &mut k), AdeliaStatus::Validation);
        assert!(last_error().contains("prime power"));
        assert_eq!(adelia_field_new(5, ptr::null_mut()), AdeliaStatus::NullPointer);
        assert_eq!(adelia_field_order(ptr::null()), 0);
        adelia_field_free(ptr::null_mut());
    }
}

#[test]
fn residue_reports() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(adelia_field_new(5, &mut k), AdeliaStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(adelia_residue_curve(k, c("(x+1)/(x^2+2)").as_ptr(), c("x^2").as_ptr(), 3, &mut r), AdeliaStatus::Ok);
        assert_eq!(adelia_report_pass(r), 1);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(adelia_report_json(r)).to_str().unwrap()).unwrap();
        assert_eq!(json["aggregate"], "0");
        adelia_report_free(r);

        assert_eq!(adelia_residue_curve(k, c("x +* 1").as_ptr(), c("x").as_ptr(), 3, &mut r), AdeliaStatus::Parse);
        assert!(last_error().contains("position"));
        assert_eq!(adelia_residue_curve(ptr::null(), c("x").as_ptr(), c("x").as_ptr(), 3, &mut r), AdeliaStatus::NullPointer);
        assert_eq!(adelia_residue_curve(k, ptr::null(), c("x").as_ptr(), 3, &mut r), AdeliaStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(adelia_residue_curve(k, bad.as_ptr().cast(), c("x").as_ptr(), 3, &mut r), AdeliaStatus::InvalidUtf8);
        adelia_field_free(k);
        assert_eq!(adelia_report_pass(ptr::null()), 0);
        assert!(adelia_report_json(ptr::null()).is_null());
    }
}

#[test]
fn hilbert_and_theta() {
    unsafe {
        let mut s = 0i8;
        assert_eq!(adelia_hilbert_symbol(2, 1, 3, 1, 3, &mut s), AdeliaStatus::Ok);
        assert_eq!(s, -1);
        assert_eq!(adelia_hilbert_symbol(2, 1, 3, 1, 4, &mut s), AdeliaStatus::Validation);
        assert_eq!(adelia_hilbert_symbol(2, 0, 3, 1, 3, &mut s), AdeliaStatus::Validation);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(adelia_theta(0, 1, 1.0, 0.0, 1.0, 0.0, 0.3, 0.0, 1e-14, &mut re, &mut im), AdeliaStatus::Ok);
        // n and 1 - n give the same term
        let direct: f64 = 2.0 * (1..40).map(|n: i32| 0.3f64.powi(n * (n - 1) / 2)).sum::<f64>();
        assert!((re - direct).abs() < 1e-12 && im.abs() < 1e-15);
        assert_eq!(adelia_theta(0, 1, 1.0, 0.0, 1.0, 0.0, 1.3, 0.0, 1e-14, &mut re, &mut im), AdeliaStatus::Validation);
    }
}

#[test]
fn configs_and_suites() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(adelia_run_config(c("task = \"zeta\"\nq = 4\nn = 8\n").as_ptr(), &mut r), AdeliaStatus::Ok);
        assert_eq!(adelia_report_pass(r), 1);
        adelia_report_free(r);
        assert_eq!(adelia_run_config(c("task = \"zeta\"\nq = 4\n").as_ptr(), &mut r), AdeliaStatus::Parse);
        assert_eq!(adelia_run_suite(c("commutator").as_ptr(), 5, &mut r), AdeliaStatus::Ok);
        assert_eq!(adelia_report_pass(r), 1);
        adelia_report_free(r);
        assert_eq!(adelia_run_suite(c("nope").as_ptr(), 5, &mut r), AdeliaStatus::Validation);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/adelia.h")).unwrap();
    for name in [
        "adelia_field_new",
        "adelia_field_free",
        "adelia_residue_curve",
        "adelia_hilbert_symbol",
        "adelia_theta",
        "adelia_run_config",
        "adelia_run_suite",
        "adelia_report_json",
        "adelia_report_free",
        "adelia_last_error",
        "ADELIA_STATUS_PANIC = 6",
        "typedef struct AdeliaReport AdeliaReport",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles and runs a C program against the header and static library
/// when a C compiler is available.
#[test]
fn c_program_links_against_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir: PathBuf = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libadelia_ffi.a");
    let Ok(cc) = Command::new("cc").arg("--version").output() else { return };
    if !cc.status.success() || !lib.exists() {
        eprintln!("skipping: no cc or no {}", lib.display());
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c_smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
