use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use flexcycle_ffi::*;

unsafe fn last_error() -> String {
    let p = fc_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn grid_basis_and_flexibility() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(fc_model_grid(3, 4, 0, FcPattern::Homogeneous as u32, &mut model), FcStatus::Ok);
        let (mut members, mut rank) = (0, 0);
        assert_eq!(fc_model_member_count(model, &mut members), FcStatus::Ok);
        assert_eq!(fc_model_cycle_rank(model, &mut rank), FcStatus::Ok);
        assert_eq!((members, rank), (27, 12));

        let mut basis = ptr::null_mut();
        assert_eq!(fc_basis_generate(model, 1, &mut basis), FcStatus::Ok);
        let (mut len, mut xd) = (0, 0);
        fc_basis_len(basis, &mut len);
        fc_basis_xd(basis, &mut xd);
        assert_eq!((len, xd), (12, 46));

        let mut n = 0;
        assert_eq!(fc_basis_cycle_members(basis, 0, ptr::null_mut(), 0, &mut n), FcStatus::BufferTooSmall);
        let mut buf = vec![0usize; n];
        assert_eq!(fc_basis_cycle_members(basis, 0, buf.as_mut_ptr(), n, &mut n), FcStatus::Ok);
        assert!(buf.iter().all(|&m| m < 27));
        assert_eq!(fc_basis_cycle_members(basis, 99, buf.as_mut_ptr(), n, &mut n), FcStatus::OutOfRange);

        let mut dim = 0;
        assert_eq!(fc_flexibility_matrix(model, basis, ptr::null_mut(), 0, &mut dim), FcStatus::BufferTooSmall);
        assert_eq!(dim, 36);
        let mut g = vec![0.0; dim * dim];
        assert_eq!(fc_flexibility_matrix(model, basis, g.as_mut_ptr(), g.len(), &mut dim), FcStatus::Ok);
        let mut cond = FcCondition::default();
        assert_eq!(fc_condition(g.as_ptr(), dim, &mut cond), FcStatus::Ok);
        assert!(cond.pl > 0.0 && cond.pdet > 0.0 && cond.pdet <= 1.0);

        fc_basis_free(basis);
        fc_model_free(model);
    }
}

#[test]
fn toml_model_and_report() {
    let text = CString::new(
        "format_version = 1\ndimension = \"2d\"\n[sections.s]\narea = 0.01\ninertia = 0.0002\nmodulus = 2.1e7\n\
         [[nodes]]\nid = 1\ncoords = [0.0, 0.0]\n[[nodes]]\nid = 2\ncoords = [0.0, 3.0]\n\
         [[nodes]]\nid = 3\ncoords = [4.0, 3.0]\n[[nodes]]\nid = 4\ncoords = [4.0, 0.0]\n\
         [[members]]\nid = 1\na = 1\nb = 2\nsection = \"s\"\n[[members]]\nid = 2\na = 2\nb = 3\nsection = \"s\"\n\
         [[members]]\nid = 3\na = 4\nb = 3\nsection = \"s\"\n\
         [[supports]]\nnode = 1\nkind = \"fixed\"\n[[supports]]\nnode = 4\nkind = \"fixed\"\n",
    )
    .unwrap();
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(fc_model_from_toml(text.as_ptr(), &mut model), FcStatus::Ok);
        let mut planar = false;
        fc_model_is_planar(model, &mut planar);
        assert!(planar);
        let algs = [1u8, 0];
        let mut report = ptr::null_mut();
        assert_eq!(fc_report_compare(model, algs.as_ptr(), algs.len(), true, &mut report), FcStatus::Ok);
        let csv = CStr::from_ptr(fc_report_text(report)).to_str().unwrap().to_owned();
        assert!(csv.contains("\n1,1,3,"), "{csv}");
        assert!(csv.contains("\nbaseline,1,3,"), "{csv}");
        fc_report_free(report);
        fc_model_free(model);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut model = ptr::null_mut();
        let bad = CString::new("format_version = 1\n").unwrap();
        assert_eq!(fc_model_from_toml(bad.as_ptr(), &mut model), FcStatus::Parse);
        assert!(model.is_null());
        assert!(last_error().contains("missing field"));
        assert_eq!(fc_model_from_toml(ptr::null(), &mut model), FcStatus::NullArgument);
        assert_eq!(fc_model_grid(0, 1, 0, 0, &mut model), FcStatus::Usage);
        assert_eq!(fc_model_grid(1, 1, 0, 17, &mut model), FcStatus::Usage);
        let missing = CString::new("/nonexistent/frame.toml").unwrap();
        assert_eq!(fc_model_from_file(missing.as_ptr(), &mut model), FcStatus::Io);

        assert_eq!(fc_model_grid(1, 1, 1, 0, &mut model), FcStatus::Ok);
        let mut basis = ptr::null_mut();
        assert_eq!(fc_basis_generate(model, 9, &mut basis), FcStatus::Usage);
        assert_eq!(fc_basis_generate(model, 1, &mut basis), FcStatus::Ok);
        let mut dim = 0;
        assert_eq!(fc_flexibility_matrix(model, basis, ptr::null_mut(), 0, &mut dim), FcStatus::Unsupported3d);
        assert!(fc_last_error_message().is_null() || !last_error().is_empty());

        let skew = [1.0, 2.0, 0.0, 1.0];
        let mut cond = FcCondition::default();
        assert_eq!(fc_condition(skew.as_ptr(), 2, &mut cond), FcStatus::NotSymmetric);
        let ok = [2.0, 0.0, 0.0, 2.0];
        assert_eq!(fc_condition(ok.as_ptr(), 2, &mut cond), FcStatus::Ok);
        assert!(fc_last_error_message().is_null());

        fc_basis_free(basis);
        fc_model_free(model);
        fc_model_free(ptr::null_mut());
        assert!(!CStr::from_ptr(fc_version()).to_bytes().is_empty());
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/flexcycle.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "fc_model_grid",
        "fc_model_from_toml",
        "fc_basis_generate",
        "fc_basis_cycle_members",
        "fc_flexibility_matrix",
        "fc_condition",
        "fc_report_compare",
        "fc_last_error_message",
        "FC_STATUS_BUFFER_TOO_SMALL",
        "typedef struct FcModel FcModel;",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libflexcycle_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipped", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "flexcycle.h"
int main(void) {
    FcModel *m = NULL;
    FcBasis *b = NULL;
    size_t xd = 0;
    if (fc_model_grid(3, 3, 0, FC_PATTERN_HOMOGENEOUS, &m) != FC_STATUS_OK) return 1;
    if (fc_basis_generate(m, 3, &b) != FC_STATUS_OK) return 2;
    fc_basis_xd(b, &xd);
    printf("%zu\n", xd);
    if (fc_basis_generate(m, 42, &b) != FC_STATUS_USAGE || fc_last_error_message() == NULL) return 3;
    fc_basis_free(b);
    fc_model_free(m);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "33");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.into());
        }
    }
    Err(())
}

fn tempfile_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
