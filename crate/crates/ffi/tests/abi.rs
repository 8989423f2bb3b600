use std::ffi::{CStr, CString};
use std::ptr;

use gca_ffi::*;

fn owned(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { gca_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = gca_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn fixture(name: &str) -> *mut GcaSeed {
    let name = CString::new(name).unwrap();
    let mut seed = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_fixture(name.as_ptr(), &mut seed) }, GcaStatus::Ok);
    seed
}

#[test]
fn mutate_round_trip() {
    let a = fixture("FIX-A");
    let mut rank = 0;
    assert_eq!(unsafe { gca_seed_rank(a, &mut rank) }, GcaStatus::Ok);
    assert_eq!(rank, 2);
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_mutate(a, 0, &mut b) }, GcaStatus::Ok);
    let mut entry = 0;
    assert_eq!(unsafe { gca_seed_matrix_entry(b, 1, 2, &mut entry) }, GcaStatus::Ok);
    assert_eq!(entry, -38);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_to_text(b, &mut text) }, GcaStatus::Ok);
    let text = CString::new(owned(text)).unwrap();
    let mut parsed = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_parse(text.as_ptr(), &mut parsed) }, GcaStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_to_text(parsed, &mut again) }, GcaStatus::Ok);
    assert_eq!(owned(again), text.to_str().unwrap());

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_mutate(b, 0, &mut back) }, GcaStatus::Ok);
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_cluster_variable(back, 0, &mut x) }, GcaStatus::Ok);
    assert_eq!(owned(x), "x");
    unsafe {
        gca_seed_free(back);
        gca_seed_free(parsed);
        gca_seed_free(b);
        gca_seed_free(a);
    }
}

#[test]
fn errors_set_status_and_message() {
    let a = fixture("FIX-C");
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_mutate(a, 5, &mut b) }, GcaStatus::OutOfRange);
    assert!(b.is_null());
    assert!(last_error().unwrap().contains("out of range"));

    let mut rank = 0;
    assert_eq!(unsafe { gca_seed_rank(a, &mut rank) }, GcaStatus::Ok);
    assert_eq!(last_error(), None);

    assert_eq!(unsafe { gca_seed_rank(ptr::null(), &mut rank) }, GcaStatus::NullPointer);
    let bad = CString::new("seed 1 0\ncluster x\n").unwrap();
    assert_eq!(unsafe { gca_seed_parse(bad.as_ptr(), &mut b) }, GcaStatus::Parse);
    let unknown = CString::new("FIX-Z").unwrap();
    assert_eq!(unsafe { gca_seed_fixture(unknown.as_ptr(), &mut b) }, GcaStatus::Parse);
    unsafe { gca_seed_free(a) };
    unsafe { gca_seed_free(ptr::null_mut()) };
}

#[test]
fn unfold_adjoin_and_verify() {
    let c = fixture("FIX-C");
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_unfold(c, GcaAdjoinMode::Total, &mut text) }, GcaStatus::Ok);
    assert!(owned(text).ends_with("0 0 2 1 0 -1 0;\n0 0 2 0 1 0 -1\n"));

    let mut adjoined = ptr::null_mut();
    assert_eq!(unsafe { gca_seed_adjoin(c, GcaAdjoinMode::Total, &mut adjoined) }, GcaStatus::Ok);
    let mut rank = 0;
    assert_eq!(unsafe { gca_seed_rank(adjoined, &mut rank) }, GcaStatus::Ok);
    assert_eq!(rank, 1);

    let mut mismatches = usize::MAX;
    for target in ["laurent", "embedding", "product-formula", "root-formula"] {
        let t = CString::new(target).unwrap();
        let status = unsafe { gca_verify(c, t.as_ptr(), 4, GcaAdjoinMode::Total, &mut mismatches) };
        assert_eq!(status, GcaStatus::Ok, "{target}: {:?}", last_error());
        assert_eq!(mismatches, 0);
    }
    let t = CString::new("nonsense").unwrap();
    assert_eq!(
        unsafe { gca_verify(c, t.as_ptr(), 1, GcaAdjoinMode::Total, &mut mismatches) },
        GcaStatus::Parse
    );
    unsafe {
        gca_seed_free(adjoined);
        gca_seed_free(c);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/gca.h");
    let source = include_str!("../src/lib.rs");
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 10);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct GcaSeed GcaSeed;"));
}
