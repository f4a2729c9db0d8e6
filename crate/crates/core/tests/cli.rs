use std::process::Command;

fn knotmesh(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_knotmesh")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn list_shows_six_cases() {
    let (code, out, _) = knotmesh(&["list"]);
    assert_eq!(code, 0);
    for name in ["helmholtz", "laplace", "convection-x", "convection-xy", "varying-helmholtz", "burger"] {
        assert!(out.contains(name));
    }
}

#[test]
fn run_csv_header() {
    let (code, out, _) = knotmesh(&["run", "helmholtz", "--boundary", "7", "--shape-c", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("x,y,exact,computed,abs_err,rel_err\n"));
}

#[test]
fn run_laplace_markdown() {
    let (code, out, _) = knotmesh(&["run", "laplace", "--boundary", "3", "--shape-c", "25"]);
    assert_eq!(code, 0);
    assert!(out.contains("| 1.5 | 0 | 1.5000 | 1.4999 |"));
}

#[test]
fn unknown_case_exit_one() {
    let (code, _, err) = knotmesh(&["run", "nosuchcase"]);
    assert_eq!(code, 1);
    assert!(err.contains("varying-helmholtz"));
}

#[test]
fn numeric_failure_exit_two() {
    let (code, _, err) = knotmesh(&["run", "burger", "--boundary", "41"]);
    assert_eq!(code, 2);
    assert!(err.contains("ill-conditioned"));
}

#[test]
fn output_is_byte_identical() {
    let args = ["run", "convection-x", "--format", "csv"];
    assert_eq!(knotmesh(&args).1, knotmesh(&args).1);
    let args = ["inspect", "laplace", "--boundary", "8"];
    assert_eq!(knotmesh(&args).1, knotmesh(&args).1);
}

#[test]
fn dump_knots_writes_table() {
    let dir = std::env::temp_dir().join(format!("knotmesh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("knots.txt");
    let (code, _, _) = knotmesh(&["run", "convection-x", "--dump-knots", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("dirichlet")).count(), 7);
    assert_eq!(text.lines().filter(|l| l.starts_with("interior")).count(), 11);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn inspect_reports_structure() {
    let (code, out, _) = knotmesh(&["inspect", "laplace", "--boundary", "8"]);
    assert_eq!(code, 0);
    assert!(out.contains("collocation matrix: 8x8, centrosymmetric"));
    assert!(out.contains("condition estimate"));
}
