use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use knotmesh_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(km_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn bessel_values() {
    let mut v = f64::NAN;
    assert_eq!(unsafe { km_bessel_j0(0.0, &mut v) }, KmStatus::Ok);
    assert_eq!(v, 1.0);
    assert_eq!(unsafe { km_bessel_i1(0.0, &mut v) }, KmStatus::Ok);
    assert_eq!(v, 0.0);
}

#[test]
fn bessel_domain_error_sets_message() {
    let mut v = 0.0;
    assert_eq!(unsafe { km_bessel_y0(-1.0, &mut v) }, KmStatus::Domain);
    assert!(!last_error().is_empty());
}

#[test]
fn null_out_pointer_rejected() {
    assert_eq!(unsafe { km_bessel_j0(1.0, ptr::null_mut()) }, KmStatus::NullPointer);
    assert!(last_error().contains("null"));
}

#[test]
fn solve_and_evaluate_laplace() {
    let name = CString::new("laplace").unwrap();
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { km_solution_new(name.as_ptr(), ptr::null(), &mut sol) }, KmStatus::Ok);
    assert!(!sol.is_null());
    let (mut u, mut exact) = (0.0, 0.0);
    unsafe {
        assert_eq!(km_solution_eval(sol, 1.5, 0.0, &mut u), KmStatus::Ok);
        assert_eq!(km_solution_exact(sol, 1.5, 0.0, &mut exact), KmStatus::Ok);
    }
    assert!((u - exact).abs() < 1e-3);

    let mut len = 0usize;
    unsafe {
        assert_eq!(km_solution_coefficients(sol, ptr::null_mut(), 0, &mut len), KmStatus::Ok);
    }
    assert_eq!(len, 3);
    let mut buf = vec![0.0; len];
    unsafe {
        km_solution_coefficients(sol, buf.as_mut_ptr(), buf.len(), &mut len);
        km_solution_free(sol);
    }
    assert!(buf.iter().any(|b| *b != 0.0));
}

#[test]
fn custom_config_and_bad_codes() {
    let name = CString::new("helmholtz").unwrap();
    let mut cfg = KmCaseConfig {
        boundary: 0,
        interior: 0,
        shape_c: 0.0,
        placement: 0,
        literal_kernel: 0,
    };
    assert_eq!(unsafe { km_case_default_config(name.as_ptr(), &mut cfg) }, KmStatus::Ok);
    assert_eq!((cfg.boundary, cfg.shape_c), (7, 3.0));

    cfg.placement = 9;
    let mut sol = ptr::null_mut();
    let s = unsafe { km_solution_new(name.as_ptr(), &cfg, &mut sol) };
    assert_eq!(s, KmStatus::InvalidArgument);
    assert!(sol.is_null());

    cfg.placement = KM_PLACEMENT_CHEBYSHEV;
    cfg.boundary = 9;
    assert_eq!(unsafe { km_solution_new(name.as_ptr(), &cfg, &mut sol) }, KmStatus::Ok);
    unsafe { km_solution_free(sol) };
}

#[test]
fn unknown_case_lists_names() {
    let name = CString::new("nosuchcase").unwrap();
    let mut sol = ptr::null_mut();
    let s = unsafe { km_solution_new(name.as_ptr(), ptr::null(), &mut sol) };
    assert_eq!(s, KmStatus::InvalidArgument);
    assert!(last_error().contains("varying-helmholtz"));
}

#[test]
fn report_text_is_csv() {
    let name = CString::new("helmholtz").unwrap();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(km_report_new(name.as_ptr(), ptr::null(), KM_FORMAT_CSV, &mut rep), KmStatus::Ok);
        let text = CStr::from_ptr(km_report_text(rep)).to_str().unwrap().to_owned();
        assert!(text.starts_with("x,y,exact,computed,abs_err,rel_err\n"));
        let mut avg = 0.0;
        assert_eq!(km_report_average_rel_err(rep, &mut avg), KmStatus::Ok);
        assert!(avg > 0.0 && avg < 0.02);
        km_report_free(rep);
        assert_eq!(km_report_new(name.as_ptr(), ptr::null(), 7, &mut rep), KmStatus::InvalidArgument);
    }
}

#[test]
fn free_accepts_null() {
    unsafe {
        km_solution_free(ptr::null_mut());
        km_report_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/knotmesh.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler found; header check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
