use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hopfloop_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { hl_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hl_last_error_message()) }.to_str().unwrap().to_owned()
}

fn generate(loops: usize, vertices: usize, externals: &str, min_valence: usize) -> (HlStatus, *mut HlGraphSum) {
    let ext = CString::new(externals).unwrap();
    let mut sum = ptr::null_mut();
    let status = unsafe { hl_generate(loops, vertices, ext.as_ptr(), min_valence, &mut sum) };
    (status, sum)
}

#[test]
fn vacuum_two_loop_two_vertex_weights() {
    let (status, sum) = generate(2, 2, "", 0);
    assert_eq!(status, HlStatus::Ok);
    let n = unsafe { hl_graph_sum_len(sum) };
    assert_eq!(n, 4);
    let mut weights = Vec::new();
    for i in 0..n {
        let mut w = ptr::null_mut();
        assert_eq!(unsafe { hl_graph_sum_weight(sum, i, &mut w) }, HlStatus::Ok);
        weights.push(take_string(w));
    }
    weights.sort();
    assert_eq!(weights, ["1/12", "1/4", "1/8", "1/8"]);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { hl_graph_sum_to_json(sum, &mut json) }, HlStatus::Ok);
    let records: Vec<serde_json::Value> = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(records.len(), 4);

    let mut w = ptr::null_mut();
    assert_eq!(unsafe { hl_graph_sum_weight(sum, 99, &mut w) }, HlStatus::Usage);
    unsafe { hl_graph_sum_free(sum) };
}

#[test]
fn error_codes() {
    assert_eq!(generate(1, 0, "", 0).0, HlStatus::Usage);
    assert!(!last_error().is_empty());
    assert_eq!(generate(1, 1, "x,x", 0).0, HlStatus::Usage);
    assert_eq!(generate(9, 1, "", 0).0, HlStatus::ResourceLimit);
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { hl_generate(1, 1, ptr::null(), 0, &mut sum) }, HlStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { hl_generate(1, 1, bad.as_ptr().cast(), 0, &mut sum) }, HlStatus::InvalidUtf8);
    assert_eq!(unsafe { hl_graph_sum_len(ptr::null()) }, 0);
    unsafe { hl_graph_sum_free(ptr::null_mut()) };
}

#[test]
fn pruned_generation_drops_low_valence_graphs() {
    let (status, sum) = generate(2, 2, "", 2);
    assert_eq!(status, HlStatus::Ok);
    // theta and dumbbell
    assert_eq!(unsafe { hl_graph_sum_len(sum) }, 2);
    unsafe { hl_graph_sum_free(sum) };
}

#[test]
fn model_and_sigma() {
    let json = CString::new(r#"{"labels":["o"],"propagator":{"o,o":"3/2"},"vertex":{"4":"81/40"}}"#).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { hl_model_from_json(json.as_ptr(), &mut model) }, HlStatus::Ok);
    let legs = CString::new("x,y").unwrap();
    for recursive in [0, 1] {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { hl_sigma(model, 1, 1, legs.as_ptr(), recursive, &mut out) }, HlStatus::Ok);
        // ½ λ g³ with g = 3/2, λ = 2/5
        assert_eq!(take_string(out), "27/40");
    }
    unsafe { hl_model_free(model) };

    let bad = CString::new(r#"{"labels":["o"],"propagator":{"o,o":"2"},"inverse_propagator":{"o,o":"1"}}"#).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { hl_model_from_json(bad.as_ptr(), &mut model) }, HlStatus::ModelInvalid);
    assert!(last_error().contains("G⁻¹"), "{}", last_error());
}

#[test]
fn verify_suites() {
    let suites = CString::new("theorem,alt-recursion").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { hl_verify(2, suites.as_ptr(), &mut report) }, HlStatus::Ok);
    assert!(take_string(report).contains("0 failures"));
    let bogus = CString::new("nope").unwrap();
    assert_eq!(unsafe { hl_verify(2, bogus.as_ptr(), ptr::null_mut()) }, HlStatus::Usage);
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hopfloop.h")).unwrap();
    for name in [
        "hl_generate",
        "hl_graph_sum_len",
        "hl_graph_sum_weight",
        "hl_graph_sum_to_json",
        "hl_graph_sum_free",
        "hl_model_from_json",
        "hl_model_free",
        "hl_sigma",
        "hl_verify",
        "hl_string_free",
        "hl_last_error_message",
        "HL_STATUS_MODEL_INVALID",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Directory holding the shared library built alongside this test binary.
fn library_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header() {
    let lib = library_dir();
    assert!(lib.join("libhopfloop_ffi.so").exists() || lib.join("libhopfloop_ffi.dylib").exists(), "{lib:?}");
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = env!("CARGO_MANIFEST_DIR");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg(format!("{manifest}/tests/c/smoke.c"))
        .arg(format!("-I{manifest}/include"))
        .arg(format!("-L{}", lib.display()))
        .arg("-lhopfloop_ffi")
        .arg(format!("-Wl,-rpath,{}", lib.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("graphs 4"), "{stdout}");
    assert!(stdout.contains("sigma 9/80"), "{stdout}");
    assert!(stdout.contains("singular rejected"), "{stdout}");
}
