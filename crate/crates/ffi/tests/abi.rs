use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cmeis_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cmeis_string_free(s) };
    out
}

#[test]
fn round_trip_through_handles() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cmeis_setup_new(-3, -4, &mut h) }, CmeisStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cmeis_degree_json(h, 1, 12, &mut out) }, CmeisStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["deg_T"], serde_json::json!({"2": "2", "3": "1"}));
    assert_eq!(v["value"], "2.48490664979");

    assert_eq!(unsafe { cmeis_coefficients_json(h, 1, 0, &mut out) }, CmeisStatus::Ok);
    let text = take(out);
    assert_eq!(text.lines().count(), 3);

    assert_eq!(unsafe { cmeis_coefficients_json(h, 1, 5000, &mut out) }, CmeisStatus::InvalidSetup);
    unsafe { cmeis_setup_free(h) };
}

#[test]
fn verify_by_name() {
    let arith = CString::new("arith").unwrap();
    assert_eq!(unsafe { cmeis_verify(arith.as_ptr(), 3) }, CmeisStatus::Ok);
    let bogus = CString::new("bogus").unwrap();
    assert_eq!(unsafe { cmeis_verify(bogus.as_ptr(), 3) }, CmeisStatus::InvalidSetup);
}

/// Directory holding the built cdylib: `deps/` beside this test binary, or
/// its parent once cargo has copied the library up.
fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap().to_path_buf();
    let up = deps.parent().unwrap().to_path_buf();
    if deps.join("libcmeis_ffi.so").exists() {
        deps
    } else {
        up
    }
}

#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    assert!(lib_dir.join("libcmeis_ffi.so").exists(), "cdylib missing in {}", lib_dir.display());
    let exe = std::env::temp_dir().join(format!("cmeis_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lcmeis_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-Wall")
        .arg("-Werror")
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
