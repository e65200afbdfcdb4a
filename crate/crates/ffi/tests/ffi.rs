use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use snfc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(snfc_last_error_message()) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { snfc_string_free(p) };
    s
}

fn builtin(name: &str) -> *mut SnfcNetwork {
    let name = CString::new(name).unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { snfc_network_builtin(name.as_ptr(), &mut net) }, SnfcStatus::Ok);
    net
}

#[test]
fn butterfly_bounds() {
    let net = builtin("butterfly");
    let (mut c_min, mut c_bar, mut upper, mut lower, mut edges) = (0, 0, 0, 0, 0);
    unsafe {
        assert_eq!(snfc_c_min(net, &mut c_min), SnfcStatus::Ok);
        assert_eq!(snfc_c_min_bar(net, &mut c_bar), SnfcStatus::Ok);
        assert_eq!(snfc_upper_bound(net, 1, &mut upper), SnfcStatus::Ok);
        assert_eq!(snfc_lower_bound(net, 1, &mut lower), SnfcStatus::Ok);
        assert_eq!(snfc_network_edge_count(net, &mut edges), SnfcStatus::Ok);
    }
    assert_eq!((c_min, c_bar, upper, lower, edges), (2, 2, 1, 1, 9));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { snfc_bound_json(net, 1, &mut json) }, SnfcStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["upper"], 1);
    unsafe { snfc_network_free(net) };
}

#[test]
fn construct_round_trip() {
    let net = builtin("butterfly");
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { snfc_construct(net, 1, 0, ptr::null(), 5, &mut code) }, SnfcStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { snfc_code_to_json(code, &mut json) }, SnfcStatus::Ok);
    let text = CString::new(take_string(json)).unwrap();
    let mut loaded = ptr::null_mut();
    assert_eq!(unsafe { snfc_code_from_json(net, text.as_ptr(), &mut loaded) }, SnfcStatus::Ok);
    let mut pass = false;
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { snfc_verify(loaded, 1, true, 0, &mut pass, &mut report) }, SnfcStatus::Ok);
    assert!(pass);
    let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(v["secure_exhaustive"], true);
    unsafe {
        snfc_code_free(code);
        snfc_code_free(loaded);
        snfc_network_free(net);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new(r#"{"nodes":["s","t"],"sources":["s"],"sink":"t","edges":[{"id":"e1","tail":"t","head":"s"}]}"#).unwrap();
    let mut net = ptr::null_mut();
    let status = unsafe { snfc_network_from_json(bad.as_ptr(), &mut net) };
    assert_eq!(status, SnfcStatus::InvalidNetwork);
    assert!(net.is_null());
    assert!(!last_error().is_empty());

    let junk = CString::new("{").unwrap();
    assert_eq!(unsafe { snfc_network_from_json(junk.as_ptr(), &mut net) }, SnfcStatus::MalformedInput);
    assert_eq!(unsafe { snfc_network_from_json(ptr::null(), &mut net) }, SnfcStatus::NullArgument);

    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { snfc_network_builtin(unknown.as_ptr(), &mut net) }, SnfcStatus::UnknownName);

    let n1 = builtin("n1");
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { snfc_construct(n1, 1, 0, ptr::null(), 0, &mut code) }, SnfcStatus::RateInfeasible);
    assert!(last_error().starts_with("RATE_INFEASIBLE"));
    let field = CString::new("6^1").unwrap();
    assert_eq!(unsafe { snfc_construct(n1, 0, 0, field.as_ptr(), 0, &mut code) }, SnfcStatus::FieldError);
    let mut c_min = 0;
    assert_eq!(unsafe { snfc_c_min(n1, &mut c_min) }, SnfcStatus::Ok);
    assert!(last_error().is_empty());
    assert_eq!(unsafe { snfc_c_min(ptr::null(), &mut c_min) }, SnfcStatus::NullArgument);
    unsafe {
        snfc_network_free(n1);
        snfc_network_free(ptr::null_mut());
        snfc_string_free(ptr::null_mut());
    }
}

/// Compiles a small C program against the generated header and the static
/// library. Skipped when no C compiler is on the path.
#[test]
fn c_smoke_program() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/snfc.h");
    assert!(header.exists());
    let exe_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = exe_dir.join("libsnfc_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
