use std::ffi::{CStr, CString};
use std::ptr;

use tdopt_ffi::*;

fn matrix(text: &str) -> *mut TdMatrix {
    let c = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { td_matrix_from_text(c.as_ptr(), &mut m) }, TdStatus::Ok);
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(td_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn queries_on_a_matrix() {
    let m = matrix("2 3\n1 0 1\n0 1 1\n");
    let (mut rows, mut cols, mut rank, mut bd, mut td) = (0, 0, 0, 0, 0);
    let mut exact = false;
    unsafe {
        assert_eq!(td_matrix_dims(m, &mut rows, &mut cols), TdStatus::Ok);
        assert_eq!(td_matrix_rank(m, &mut rank), TdStatus::Ok);
        assert_eq!(td_branch_depth(m, &mut bd), TdStatus::Ok);
        assert_eq!(td_dual_treedepth(m, &mut td, &mut exact), TdStatus::Ok);
        td_matrix_free(m);
    }
    assert_eq!((rows, cols, rank, bd, td, exact), (2, 3, 2, 2, 2, true));
}

#[test]
fn transform_and_json() {
    let m = matrix("[[1,1,1],[2,1,1],[1,2,1]]");
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(td_transform(m, 3, &mut t), TdStatus::Ok);
        let mut depth = 0;
        assert_eq!(td_transform_depth(t, &mut depth), TdStatus::Ok);
        assert_eq!(depth, 1);
        let mut json = ptr::null_mut();
        assert_eq!(td_transform_json(t, &mut json), TdStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        td_string_free(json);
        td_transform_free(t);
        td_matrix_free(m);
        assert!(text.contains("\"kind\":\"transform\""));
        let artifact = tdopt::io::parse_artifact(&text).unwrap();
        assert!(tdopt::cli::cmd_verify(&artifact, &tdopt::Limits::default()).passed());
    }
}

#[test]
fn exceeded_depth_and_parse_errors() {
    let m = matrix("2 3\n1 0 1\n0 1 1\n");
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(td_transform(m, 1, &mut t), TdStatus::DepthExceeded);
        assert!(t.is_null());
        assert!(last_error().contains("exceeds 1"));
        td_matrix_free(m);

        let bad = CString::new("2 2\n1 x\n").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(td_matrix_from_text(bad.as_ptr(), &mut out), TdStatus::Parse);
        assert!(out.is_null());
        assert_eq!(td_matrix_from_text(ptr::null(), &mut out), TdStatus::NullArgument);
        let mut rank = 0;
        assert_eq!(td_matrix_rank(ptr::null(), &mut rank), TdStatus::NullArgument);
    }
}

#[test]
fn size_limit_is_reported() {
    let rows: Vec<String> = (0..8)
        .map(|i| (0..8).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(" "))
        .collect();
    let m = matrix(&format!("8 8\n{}\n", rows.join("\n")));
    let mut bd = 0;
    assert_eq!(unsafe { td_branch_depth(m, &mut bd) }, TdStatus::SizeLimit);
    unsafe { td_matrix_free(m) };
}

#[test]
fn solve_through_json() {
    let inst = CString::new(
        r#"{"A":[[1,1]],"b":[3],"l":[0,0],"u":[3,3],
            "objective":[{"kind":"quadratic","a":1,"c":0},{"kind":"quadratic","a":1,"c":0}]}"#,
    )
    .unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(td_solve_json(inst.as_ptr(), TdSolveMode::Exact, 4, &mut out), TdStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_string();
        td_string_free(out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["value"], "5");
        assert_eq!(v["status"], "optimal");
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tdopt.h")).unwrap();
    for name in [
        "typedef struct TdMatrix TdMatrix;",
        "td_matrix_from_text",
        "td_transform_json",
        "td_solve_json",
        "td_last_error",
        "TD_STATUS_DEPTH_EXCEEDED",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
