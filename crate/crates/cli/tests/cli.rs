use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilorb"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), value, stderr)
}

#[test]
fn count_five_three_one() {
    let (code, v, _) = run(&["count", "--p", "5", "--n", "9", "--q", "witt:9:U1.ZERO", "--lambda", "5,3,1", "--check"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][0]["closed"], 10);
    assert_eq!(v["totals"]["SO"], 10);
}

#[test]
fn very_even_doubles_for_so() {
    let (code, v, _) = run(&["count", "--p", "7", "--n", "4", "--lambda", "2,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["totals"]["O"], 1);
    assert_eq!(v["totals"]["SO"], 2);
}

#[test]
fn impossible_form_is_rejected() {
    let (code, v, err) = run(&["count", "--p", "5", "--n", "1", "--q", "witt:1:U1RHO.U1RHO"]);
    assert_eq!(code, 2);
    assert!(v.is_null());
    assert!(err.contains("anisotropic dimension 4"), "{err}");
}

#[test]
fn even_prime_is_rejected() {
    let (code, _, _) = run(&["count", "--p", "2", "--n", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn represent_second_very_even_class() {
    let (code, v, _) = run(&["represent", "--p", "7", "--n", "4", "--lambda", "2,2", "--ve", "II"]);
    assert_eq!(code, 0);
    assert_eq!(v["verify"]["matches_label"], true);
    assert_eq!(v["triple"]["X"], serde_json::json!([[0, 3, 0, "1"], [1, 2, 0, "-1"]]));
}

#[test]
fn facet_of_hyperbolic_pair() {
    let (code, v, _) = run(&["facet", "--p", "7", "--n", "4", "--lambda", "2,2", "--ve", "I"]);
    assert_eq!(code, 0);
    assert_eq!(v["facet"]["dim"], 1);
    assert_eq!(v["agree"], true);
    assert_eq!(v["facet"]["lineality"], serde_json::json!([[1, 1]]));
}

#[test]
fn selftest_passes_and_sabotage_fails() {
    let (code, v, _) = run(&["selftest", "--p", "5,7", "--n-max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);

    let (code, v, _) = run(&["selftest", "--p", "7", "--n-max", "4", "--sabotage"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn selftest_trivial_range() {
    let (code, v, _) = run(&["selftest", "--p", "5", "--n-max", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "--p", "5", "--n", "6"];
    let a = Command::new(env!("CARGO_BIN_EXE_nilorb")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_nilorb")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
