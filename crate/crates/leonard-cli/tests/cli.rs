//! End-to-end tests against the compiled binary: documents go in on stdin or
//! by path, and stdout plus exit codes are checked byte for byte.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const PA_A: &str = "field q\n\
d 3\n\
theta -3/2 -1/2 1/2 3/2\n\
theta* -3/2 -1/2 1/2 3/2\n\
varphi -3/2 -2 -3/2\n\
phi 3/2 2 3/2\n";

const PA_B: &str = "field q\n\
d 3\n\
theta -15/2 -1/2 9/2 15/2\n\
theta* -3/2 -9/10 1/10 3/2\n\
varphi -15/2 -54/5 -15/2\n\
phi 3/2 46/5 27/2\n";

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_leonard"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary exits")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn validate_accepts_the_reference_array() {
    let out = run(&["validate", "-"], Some(PA_A));
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "PA1 pass\nPA2 pass\nPA3 pass\nPA4 pass\nPA5 pass\n"
    );
}

#[test]
fn validate_reports_duplicate_eigenvalues() {
    let broken = PA_A.replace("theta -3/2 -1/2 1/2 3/2", "theta -3/2 -1/2 1/2 -3/2");
    let out = run(&["validate", "-"], Some(&broken));
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("PA2 fail (0,3)"));
}

#[test]
fn validate_rejects_malformed_fractions() {
    let broken = PA_A.replace("3/2", "3//2");
    let out = run(&["validate", "-"], Some(&broken));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "stderr: {err}");
    assert!(err.contains("3//2"));
}

#[test]
fn classify_pa_a_is_case_one() {
    let out = run(&["classify", "-"], Some(PA_A));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("case case-i\npartition {id,d,D,dD,s,ds,Ds,dDs}\n"));
    assert_eq!(text.matches("self-map").count(), 4);
    assert_eq!(text.matches("swap-map").count(), 4);
}

#[test]
fn classify_pa_b_with_brute_force() {
    let out = run(&["classify", "--brute-force", "-"], Some(PA_B));
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "case case-iii\n\
         partition {id,dDs} {d,ds} {D,Ds} {dD,s}\n\
         self-map [1, 0, 1, 0]\n\
         swap-map [-1/5, 0, -5, 0]\n\
         brute-force partition {id,dDs} {d,ds} {D,Ds} {dD,s}\n\
         brute-force agreement yes\n"
    );
}

#[test]
fn classify_json_is_structured() {
    let out = run(&["classify", "--json", "-"], Some(PA_B));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["case"], "case-iii");
    assert_eq!(v["swap_maps"][0][0], "-1/5");
}

#[test]
fn orbit_emits_eight_revalidating_documents() {
    let out = run(&["orbit", "-"], Some(PA_B));
    assert!(out.status.success());
    let text = stdout(&out);
    let blocks: Vec<&str> = text.split("relative ").filter(|b| !b.is_empty()).collect();
    assert_eq!(blocks.len(), 8);
    for block in blocks {
        let doc = block.split_once('\n').unwrap().1;
        let reval = run(&["validate", "-"], Some(doc));
        assert!(reval.status.success(), "relative fails to revalidate");
    }
    let names: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("relative "))
        .collect();
    assert_eq!(names, ["id", "d", "D", "dD", "s", "ds", "Ds", "dDs"]);
}

#[test]
fn affine_solve_recovers_a_shift() {
    // PA-A sent through (xi, zeta, xi*, zeta*) = (2, 1, 1, 0).
    let shifted = "field q\n\
d 3\n\
theta -2 0 2 4\n\
theta* -3/2 -1/2 1/2 3/2\n\
varphi -3 -4 -3\n\
phi 3 4 3\n";
    let dir = std::env::temp_dir();
    let src = dir.join("leonard_cli_src.txt");
    let dst = dir.join("leonard_cli_dst.txt");
    std::fs::write(&src, PA_A).unwrap();
    std::fs::write(&dst, shifted).unwrap();
    let out = run(
        &["affine-solve", src.to_str().unwrap(), dst.to_str().unwrap()],
        None,
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[2, 1, 1, 0]\n");
}

#[test]
fn affine_solve_reports_none() {
    let dir = std::env::temp_dir();
    let a = dir.join("leonard_cli_a.txt");
    let b = dir.join("leonard_cli_b.txt");
    std::fs::write(&a, PA_A).unwrap();
    std::fs::write(&b, PA_B).unwrap();
    let out = run(&["affine-solve", a.to_str().unwrap(), b.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "none\n");
}

#[test]
fn realize_certifies_the_reference_array() {
    let out = run(&["realize", "--certify", "-"], Some(PA_A));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("A\n-3/2 0 0 0\n1 -1/2 0 0\n"));
    assert!(text.contains("A*\n-3/2 -3/2 0 0\n"));
    assert!(text.ends_with("CERTIFIED\n"));
}

#[test]
fn fit_prints_the_family_and_case() {
    let out = run(&["fit", "-"], Some(PA_B));
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "type II\nq 1\nq-inverse 1\neta 0\nmu 5\nh 1\neta* 0\nmu* 1\nh* -1/5\ntau 0\ncase case-iii\n"
    );
}

#[test]
fn generate_validates_in_a_pipeline_and_is_deterministic() {
    let args = ["generate", "--type", "II", "--d", "4", "--field", "q", "--seed", "7"];
    let first = run(&args, None);
    assert!(first.status.success());
    let second = run(&args, None);
    assert_eq!(stdout(&first), stdout(&second), "byte determinism");
    let reval = run(&["validate", "-"], Some(&stdout(&first)));
    assert!(reval.status.success());
}

#[test]
fn generate_type_iv_needs_the_gf4_extension() {
    let refused = run(
        &["generate", "--type", "IV", "--d", "3", "--field", "gf 2", "--seed", "0"],
        None,
    );
    assert_eq!(refused.status.code(), Some(2));
    let accepted = run(
        &["generate", "--type", "IV", "--d", "3", "--field", "gf 2 ext 1", "--seed", "0"],
        None,
    );
    assert!(accepted.status.success());
    let text = stdout(&accepted);
    assert!(text.starts_with("field gf 2 ext 1\nd 3\n"));
    let reval = run(&["validate", "-"], Some(&text));
    assert!(reval.status.success());
}

#[test]
fn self_and_swap_maps_match_classify() {
    let self_out = run(&["self-maps", "-"], Some(PA_B));
    assert_eq!(stdout(&self_out), "[1, 0, 1, 0]\n");
    let swap_out = run(&["swap-maps", "-"], Some(PA_B));
    assert_eq!(stdout(&swap_out), "[-1/5, 0, -5, 0]\n");
    let json_out = run(&["swap-maps", "--json", "-"], Some(PA_B));
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert_eq!(v[0], serde_json::json!(["-1/5", "0", "-5", "0"]));
}

#[test]
fn fit_reports_the_minimal_polynomial_for_extension_q() {
    // A rational array whose q lives in Q(sqrt(5)); its minimal polynomial
    // is x^2 - 3x + 1.
    let irrational_q = "field q\n\
d 3\n\
theta 2 8 22 58\n\
theta* 4 11 29 76\n\
varphi -376 -1230 -2576\n\
phi 16 30 56\n";
    let reval = run(&["validate", "-"], Some(irrational_q));
    assert!(reval.status.success(), "fixture must be valid");
    let out = run(&["fit", "-"], Some(irrational_q));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("type I\n"), "got: {text}");
    assert!(text.contains("q 3/2-1/2*sqrt(5)\n"));
    assert!(text.contains("q-inverse 3/2+1/2*sqrt(5)\n"));
    assert!(text.contains("q-minimal-polynomial x^2 + -3*x + 1\n"));
}
