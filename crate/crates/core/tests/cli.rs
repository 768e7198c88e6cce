use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_replica-calculus"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn apply_prints_big_delta() {
    let (code, out, _) = run(&["apply", "--op", "D", "--graph", "(1,2)"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2(1,2)^2 - 8(1,2)(1,3) + 6(1,2)(3,4)\n");
}

#[test]
fn check_passes_with_zero_residual() {
    let (code, out, _) = run(&["check", "--graph", "(1,2)"]);
    assert_eq!(code, 0);
    assert!(out.contains("residual 0"));
}

#[test]
fn parity_error_exits_one() {
    let (code, out, err) = run(&["apply", "--op", "C", "--graph", "(1)(2)(3)"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["nope"]).0, 2);
    assert_eq!(run(&["check", "--max-edges", "x"]).0, 2);
}

#[test]
fn identities_json_is_byte_identical_across_runs() {
    let args = ["identities", "--max-edges", "2", "--format", "json"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 4);
    let delta = serde_json::to_string(&doc[0]["delta"]).unwrap();
    assert!(replica_calculus::Polynomial::from_wire(&delta).is_ok());
}

#[test]
fn catalog_check_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("rc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("check.json");
    let (code, out, _) = run(&["check", "--max-edges", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["checked"], 12);
    assert_eq!(doc["pass"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_reads_config() {
    let dir = std::env::temp_dir().join(format!("rc-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(
        &path,
        r#"{"N":2,"beta":0.5,"lambda_step":0.05,"beta_step":0.001,"quad_nodes":20,"mc_samples":0,"seed":1,"kernel":"exact"}"#,
    )
    .unwrap();
    let (code, out, err) = run(&["verify", "--config", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    for r in doc.as_array().unwrap() {
        for field in ["check", "inputs", "lhs", "rhs", "ratio", "rel_error", "pass"] {
            assert!(r.get(field).is_some(), "{field} missing");
        }
    }
    std::fs::write(&path, r#"{"N":2,"temperature":1.0}"#).unwrap();
    assert_eq!(run(&["verify", "--config", path.to_str().unwrap()]).0, 1);
    std::fs::remove_dir_all(dir).unwrap();
}
