use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use jacobi_circuit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(jc_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn engine_round_trip() {
    let mut engine = ptr::null_mut();
    assert_eq!(unsafe { jc_engine_new(4, &mut engine) }, JcStatus::Ok);
    let mut value = 0;
    let mut cost = JcCost::default();
    let status = unsafe { jc_engine_eval(engine, c("5").as_ptr(), c("181").as_ptr(), &mut value, &mut cost) };
    assert_eq!(status, JcStatus::Ok);
    assert_eq!(value, 1);
    assert!(cost.streamed);
    assert_eq!((cost.n_padded, cost.block_iterations), (8, 1));

    // Null cost pointer is allowed.
    let status = unsafe { jc_engine_eval(engine, c("3").as_ptr(), c("9").as_ptr(), &mut value, ptr::null_mut()) };
    assert_eq!(status, JcStatus::Ok);
    assert_eq!(value, 0);
    unsafe { jc_engine_free(engine) };
}

#[test]
fn error_codes_and_messages() {
    let mut value = 0;
    assert_eq!(unsafe { jc_jacobi(c("3").as_ptr(), c("10").as_ptr(), &mut value) }, JcStatus::BadModulus);
    assert!(last_error().contains("10"));
    assert_eq!(unsafe { jc_jacobi(c("abc").as_ptr(), c("9").as_ptr(), &mut value) }, JcStatus::InvalidArgument);
    assert_eq!(unsafe { jc_jacobi(ptr::null(), c("9").as_ptr(), &mut value) }, JcStatus::NullPointer);
    assert_eq!(unsafe { jc_jacobi(c("2").as_ptr(), c("7").as_ptr(), &mut value) }, JcStatus::Ok);
    assert_eq!(value, 1);
    assert_eq!(last_error(), "");

    let mut engine = ptr::null_mut();
    assert_eq!(unsafe { jc_engine_new(0, &mut engine) }, JcStatus::InvalidArgument);
    assert!(engine.is_null());
}

#[test]
fn simulation_handle() {
    let mut sim = ptr::null_mut();
    let status = unsafe { jc_simulation_run(c("175").as_ptr(), c("7").as_ptr(), 0, 0, &mut sim) };
    assert_eq!(status, JcStatus::Ok);
    let mut p = 0.0;
    assert_eq!(unsafe { jc_simulation_success_prob(sim, &mut p) }, JcStatus::Ok);
    assert!(p > 0.1);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { jc_simulation_json(sim, &mut json) }, JcStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { jc_string_free(json) };
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["b"], "7");
    unsafe { jc_simulation_free(sim) };

    let status = unsafe { jc_simulation_run(c("175").as_ptr(), c("7").as_ptr(), 30, 0, &mut sim) };
    assert_eq!(status, JcStatus::CapExceeded);
    assert!(sim.is_null());
}

#[test]
fn factorization_handle() {
    let mut f = ptr::null_mut();
    let status = unsafe { jc_special_factor(c("324").as_ptr(), JcOracle::Classical, 0, 0, &mut f) };
    assert_eq!(status, JcStatus::Ok);
    assert!(unsafe { jc_factorization_ok(f) });
    let len = unsafe { jc_factorization_len(f) };
    let mut got = Vec::new();
    for i in 0..len {
        let mut prime = ptr::null_mut();
        let mut e = 0;
        assert_eq!(unsafe { jc_factorization_entry(f, i, &mut prime, &mut e) }, JcStatus::Ok);
        got.push((unsafe { CStr::from_ptr(prime) }.to_str().unwrap().to_owned(), e));
        unsafe { jc_string_free(prime) };
    }
    assert_eq!(got, vec![("2".to_owned(), 2), ("3".to_owned(), 4)]);
    let mut prime = ptr::null_mut();
    let mut e = 0;
    assert_eq!(unsafe { jc_factorization_entry(f, len, &mut prime, &mut e) }, JcStatus::InvalidArgument);
    unsafe { jc_factorization_free(f) };

    let status = unsafe { jc_special_factor(c("175").as_ptr(), JcOracle::Simulator, 0, 3, &mut f) };
    assert_eq!(status, JcStatus::Ok);
    assert!(unsafe { jc_factorization_ok(f) });
    unsafe { jc_factorization_free(f) };

    // 15 = 3 · 5 repeats an exponent, so the run aborts.
    let status = unsafe { jc_special_factor(c("15").as_ptr(), JcOracle::Classical, 0, 0, &mut f) };
    assert_eq!(status, JcStatus::Ok);
    assert!(!unsafe { jc_factorization_ok(f) });
    unsafe { jc_factorization_free(f) };
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        jc_engine_free(ptr::null_mut());
        jc_simulation_free(ptr::null_mut());
        jc_factorization_free(ptr::null_mut());
        jc_string_free(ptr::null_mut());
        assert_eq!(jc_factorization_len(ptr::null()), 0);
        assert!(!jc_factorization_ok(ptr::null()));
    }
}

/// Compiles and runs a C program against the generated header and the static
/// library, when a C compiler and the archive are available.
#[test]
fn header_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("jacobi_circuit.h").exists());

    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let archive = profile_dir.join("libjacobi_circuit_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C link check: no archive at {} or no cc", archive.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("jacobi_circuit_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(&header_dir)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
