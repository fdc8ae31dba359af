use std::io::Write;
use std::process::{Command, Output, Stdio};

use pcqe::parse::parse_formula;
use pcqe::sample::equivalent;

fn pcqe(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcqe"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn problem(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const ROOTS: &str =
    "exists c . forall b . forall a . ((a == d and b == c) or (a == c and b == 1)) -> b == a^2\n";

#[test]
fn solve_roots_of_unity() {
    let f = problem(ROOTS);
    let o = pcqe(&["solve", f.path().to_str().unwrap()], "");
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "d + 1 == 0 or d + I == 0 or d - 1 == 0 or d - I == 0"
    );
}

#[test]
fn solve_orthogonality_from_stdin() {
    let text = pcqe::corpus::orthogonality(3).formula;
    let o = pcqe(&["solve"], &text);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "v1 == 0 and v2 == 0 and v3 == 0");
}

#[test]
fn headers_are_applied() {
    let f = problem(
        "# nf: cartesian\n# assume: Re(g) > 0\n# assume: Im(g) == 0\nexists x . Im(x) == 0 and x^2 == g\n",
    );
    let o = pcqe(&["solve", f.path().to_str().unwrap()], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "T");
    let bad = problem("# colour: blue\nx == 0\n");
    assert_eq!(pcqe(&["solve", bad.path().to_str().unwrap()], "").status.code(), Some(1));
}

#[test]
fn empty_file_is_a_syntax_error() {
    let f = problem("");
    let o = pcqe(&["solve", f.path().to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
}

#[test]
fn decide_exit_codes() {
    let cartesian =
        "forall z . exists x . exists y . Im(x) == 0 and Im(y) == 0 and z == x + I*y";
    let o = pcqe(&["decide"], cartesian);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "true"));
    let o = pcqe(&["decide"], "exists z . z^2 + 1 == 0");
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "true"));
    let o = pcqe(&["decide"], "forall z . z*conj(z) == 1");
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(3), "false"));
    let o = pcqe(&["decide"], "Re(z) == 0");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("free variables"));
}

#[test]
fn json_report() {
    let o = pcqe(&["solve", "--json", "--nf", "cartesian"], "exists w . v*conj(w) == 1");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 5);
    assert_eq!(v["backend"], "builtin");
    assert_eq!(v["backend_calls"], 1);
    assert_eq!(v["nf_used"], "cartesian");
    assert!(v["wall_seconds"].as_f64().unwrap() >= 0.0);
    let out = parse_formula(v["result"].as_str().unwrap()).unwrap();
    let expected = parse_formula("v != 0").unwrap();
    assert!(equivalent(&out, &expected, &[], 300, 3).unwrap().holds());
}

#[test]
fn backend_failures_exit_with_two() {
    let o = pcqe(&["solve", "--backend", "exec:false"], "exists z . z^2 + 1 == 0");
    assert_eq!(o.status.code(), Some(2));
    let o = pcqe(&["solve", "--backend", "exec:echo 'exists x . x == 0'"], "exists z . z^2 + 1 == 0");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn external_backend_round_trip() {
    let me = env!("CARGO_BIN_EXE_pcqe");
    let backend = format!("exec:{me} real-qe");
    let o = pcqe(&["solve", "--backend", &backend], ROOTS);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o),
        "d + 1 == 0 or d + I == 0 or d - 1 == 0 or d - I == 0"
    );
}

#[test]
fn assume_flag() {
    let o = pcqe(
        &["solve", "--assume", "Re(R) > 0", "--assume", "Im(R) == 0"],
        "exists x . R*x == 1",
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "T");
}

#[test]
fn output_is_a_fixed_point() {
    let first = stdout(&pcqe(&["solve"], ROOTS));
    let second = pcqe(&["solve"], &first);
    assert!(second.status.success());
    let a = parse_formula(&first).unwrap();
    let b = parse_formula(&stdout(&second)).unwrap();
    assert!(equivalent(&a, &b, &[], 300, 5).unwrap().holds());
}

#[test]
fn corpus_filters() {
    let o = pcqe(&["corpus", "orthogonality-3", "--points", "200"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("orthogonality-3    pass"));
    assert!(text.ends_with("1 run, 0 failed"));
    let o = pcqe(&["corpus", "no-such-example"], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("0 run, 0 failed"));
}

#[test]
fn corpus_normal_forms_agree() {
    for key in ["roots-2", "merging", "self-adjoint-2", "rc-high-pass"] {
        for nf in ["conjugate", "cartesian"] {
            let o = pcqe(&["corpus", key, "--nf", nf, "--points", "300"], "");
            assert!(o.status.success(), "{key} {nf}: {}", stdout(&o));
        }
    }
}
