use std::fs;
use std::process::{Command, Output};

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge")).args(args).env_remove("HODGE_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn char_prints_the_character() {
    let o = hodge(&["char", "--lambda", "2,1", "--mu", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn unsorted_partitions_are_canonicalized_with_a_warning() {
    let o = hodge(&["char", "--lambda", "1,2", "--mu", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
    assert!(stderr(&o).contains("using (2,1)"), "{}", stderr(&o));
}

#[test]
fn malformed_partition_is_a_usage_error() {
    let o = hodge(&["char", "--lambda", "2,x", "--mu", "1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qdim_emits_json_series() {
    let o = hodge(&["qdim", "--lambda", "1", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["series"]["valuation"], -1);
    assert_eq!(v["series"]["order"], 6);
    assert_eq!(v["series"]["coefficients"][0], serde_json::json!([-1, "1/1", "0/1"]));
    assert_eq!(v["series"]["coefficients"][1], serde_json::json!([1, "-1/24", "0/1"]));
}

#[test]
fn tables_are_deterministic_and_contain_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = hodge(&["tables", "--g-max", "2", "--n-max", "2", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for name in ["linear.json", "cubic.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
    }
    let v: serde_json::Value = serde_json::from_slice(&fs::read(a.join("linear.json")).unwrap()).unwrap();
    assert_eq!(v["entries"]["(1|1|0)"], "1/24");
    assert_eq!(v["entries"]["(2|2|2)"], "7/5760");
    let v: serde_json::Value = serde_json::from_slice(&fs::read(a.join("cubic.json")).unwrap()).unwrap();
    assert_eq!(v["entries"]["(1|1|0,0,0)"], "1/24");
    assert_eq!(v["entries"]["(2|1|2,1,0)"], "1/2880");
}

#[test]
fn tables_csv() {
    let o = hodge(&["tables", "--g-max", "1", "--n-max", "1", "--kind", "linear", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "g,nu,j,value\n1,0,1,1/24\n1,1,0,1/24\n");
}

#[test]
fn over_budget_tables_exit_2() {
    let o = hodge(&["tables", "--g-max", "4", "--n-max", "1", "--kind", "linear"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));
    let o = hodge(&["tables", "--g-max", "3", "--n-max", "1", "--kind", "cubic"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_identities_passes() {
    let o = hodge(&["verify", "identities"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["schema"], "hodge-report/1");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_bilinear_low_degree_passes() {
    let o = hodge(&["verify", "bilinear", "--d", "2", "--a", "1,1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn injected_edge_sign_error_is_caught() {
    let o = hodge(&["verify", "bilinear", "--d", "2", "--a", "1", "--inject-edge-sign-error"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("first mismatch: bilinear") && err.contains("at u^"), "{err}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(v["first_failure"]["first_mismatch"]["at"].is_string());
}

#[test]
fn bad_verify_config_exits_2() {
    for args in [&["verify", "fock", "--a", "-1"][..], &["verify", "gmv", "--g", "3"], &["verify", "nope"]] {
        assert_eq!(hodge(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cache_directory_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hodge"))
            .args(["tables", "--g-max", "1", "--n-max", "2", "--kind", "linear"])
            .env("HODGE_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let cached = dir.path().join("linear-table.json");
    assert!(cached.exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}
