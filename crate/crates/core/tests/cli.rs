use std::path::Path;
use std::process::{Command, Output};

fn mukit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukit"))
        .args(args)
        .current_dir(dir)
        .env("MUKIT_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_then_measure() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&mukit(&["gen-data", "--n", "80", "--d", "3", "--seed", "5", "--output", "d.csv"], dir.path()));
    let exact = stdout(&mukit(&["mu-exact", "--input", "d.csv"], dir.path()));
    assert!(exact.starts_with("method,n_prime,seed,mu_value,wall_ms\nExactFull,80,,"));

    let oracle_err = mukit(&["mu-oracle", "--input", "d.csv"], dir.path());
    assert_eq!(oracle_err.status.code(), Some(2), "80 rows exceed the brute-force limit");

    let json = stdout(&mukit(&["mu-approx", "--input", "d.csv", "--n-prime", "24", "--format", "json"], dir.path()));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());

    let low = stdout(&mukit(&["lowrank", "--input", "d.csv", "--rank", "1", "--beta", "1,0,-1"], dir.path()));
    assert!(low.contains("loss_gap,") && low.contains("bound,"));
}

#[test]
fn experiment_is_reproducible_and_configurable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"n": 150, "d": 3, "data_seed": 2, "sketch_sizes": [16, 32], "seeds": [4, 5], "output": "a.csv", "svg": "a.svg"}"#,
    )
    .unwrap();
    stdout(&mukit(&["experiment", "--config", "cfg.json"], dir.path()));
    stdout(&mukit(&["experiment", "--config", "cfg.json", "--output", "b.csv"], dir.path()));
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 1 + 2 * 2 * 3);
    assert!(std::fs::read_to_string(dir.path().join("a.svg")).unwrap().starts_with("<svg"));

    stdout(&mukit(&["experiment", "--config", "cfg.json", "--output", "r.json", "--format", "json"], dir.path()));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    assert_eq!(v["rows"][0]["method"], "ExactFull");
    assert!(v["metadata"]["caveat"].is_string());
}

#[test]
fn bad_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "x0,label\n1,1\n2,what\n").unwrap();
    let o = mukit(&["mu-exact", "--input", "bad.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = mukit(&["experiment", "--config", "missing.json"], dir.path());
    assert!(!o.status.success());
}
