use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn vacalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vacalc"))
        .args(args)
        .output()
        .expect("spawn vacalc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn write_vac(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vacalc-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const NS_BAD: &str = "algebra ns_bad {
  param c;
  generator L : even, weight 2;
  generator G : odd, weight 3/2;
  central C = c;
  bracket [L, L] = d(L) + 2*lambda*L + 1/12*lambda^3*C;
  bracket [L, G] = d(G) + 3/2*lambda*G;
  bracket [G, G] = L + 1/3*lambda^2*C;
}
";

#[test]
fn bracket_on_builtin() {
    let o = vacalc(&["bracket", "L", "L", "--builtin", "virasoro"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d(L) + 2*lambda*L + 1/12*lambda^3*C");
    assert!(stderr(&o).is_empty());
}

#[test]
fn quoted_query_and_negative_index() {
    let a = vacalc(&["nproduct phi1 -2 phi2", "--builtin", "free_fermion"]);
    let b = vacalc(&[
        "nproduct",
        "phi1",
        "-2",
        "phi2",
        "--builtin",
        "free_fermion",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), ":d(phi1) phi2:");
}

#[test]
fn ope_and_modes() {
    let o = vacalc(&["ope", "L", "L", "--builtin", "virasoro", "--format", "ope"]);
    assert_eq!(
        stdout(&o),
        "L(z)L(w) ~ (c/2)/(z-w)^4 + 2*L(w)/(z-w)^2 + d(L)(w)/(z-w)"
    );
    let o = vacalc(&["modes G_{1/2} G_{-1/2}", "--builtin", "ns"]);
    assert_eq!(stdout(&o), "L_0");
}

#[test]
fn json_envelope() {
    let o = vacalc(&[
        "bracket",
        "L",
        "L",
        "--builtin",
        "virasoro",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["result"].is_object());
}

#[test]
fn definition_file_round_trip() {
    let shown = vacalc(&["show", "--builtin", "ns"]);
    let path = write_vac("ns.vac", &stdout(&shown));
    let o = vacalc(&["check", "jacobi", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("jacobi: PASS"));
}

#[test]
fn failed_check_exits_one() {
    let path = write_vac("ns_bad.vac", NS_BAD);
    let o = vacalc(&["check", "jacobi", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(G, G, L)"));
    assert!(stderr(&o).contains("check failed"));
    let o = vacalc(&["check", "skew", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let path = write_vac(
        "undeclared.vac",
        "algebra v {\n  generator L : even;\n  bracket [L,L] = lambda*M;\n}\n",
    );
    let o = vacalc(&["show", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("undeclared.vac:3:26: undeclared symbol `M`"),
        "{err}"
    );
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bracket", "L", "L"],
        vec![
            "bracket",
            "L",
            "L",
            "--builtin",
            "virasoro",
            "--format",
            "xml",
        ],
        vec!["bracket", "L", "L", "--builtin", "nope"],
        vec!["frobnicate", "--builtin", "virasoro"],
        vec!["bracket", "L", "--builtin", "virasoro"],
        vec!["bracket", "L", "L", "--algebra", "/nonexistent/x.vac"],
    ] {
        let o = vacalc(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn degree_guard_and_range() {
    let o = vacalc(&[
        "bracket",
        "L",
        "L",
        "--builtin",
        "virasoro",
        "--max-lambda-degree",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = vacalc(&[
        "check",
        "borcherds",
        "--builtin",
        "free_fermion",
        "--range",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "borcherds: PASS (216 cases)");
}
