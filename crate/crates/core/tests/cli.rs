use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn classgroup_prints_the_group() {
    let o = kclass(&["classgroup", "-D", "-23"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("Z/3"), "{out}");
    assert!(out.contains("(2,1,3)") || out.contains("(2,-1,3)"), "{out}");
}

#[test]
fn invariants_then_blind_reconstruction() {
    let dir = TempDir::new().unwrap();
    let bundle = dir.path().join("b.json");
    let report = dir.path().join("r.json");
    for tie in ["first", "last", "seed:7"] {
        let o = kclass(&["invariants", "-D", "-84", "--primes", "40", "--tie", tie, "-o", bundle.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(json(&bundle)["version"], "kclass-bundle/1");
        let o = kclass(&["reconstruct", bundle.to_str().unwrap(), "--tie", tie, "-o", report.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let r = json(&report);
        assert_eq!(r["class_number"], 4);
        assert_eq!(r["class_group"], serde_json::json!(["2", "2"]));
        assert_eq!(r["passed"], true);
    }
}

#[test]
fn bundle_only_holds_the_entries_of_its_own_pass() {
    let dir = TempDir::new().unwrap();
    let bundle = dir.path().join("b.json");
    let b = bundle.to_str().unwrap();
    assert_eq!(code(&kclass(&["invariants", "-D", "-84", "--primes", "40", "-o", b])), 0);
    // another tie-break either finds what it needs or reports the gap
    let o = kclass(&["reconstruct", b, "--tie", "last"]);
    match code(&o) {
        0 => assert!(String::from_utf8_lossy(&o.stdout).contains("\"class_number\": 4")),
        3 => assert!(stderr(&o).contains("no entry"), "{}", stderr(&o)),
        c => panic!("exit {c}: {}", stderr(&o)),
    }
}

#[test]
fn roundtrip_of_a_synthetic_spec() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "spec.json",
        r#"{"invariant_factors":["2","4"],"primes":[
            {"norm":"2","class":[1,0],"residue_char":2},
            {"norm":"3","class":[1,1],"residue_char":3},
            {"norm":"5","class":[0,1],"residue_char":5},
            {"norm":"7","class":[1,3],"residue_char":7},
            {"norm":"9","class":[0,2],"residue_char":3},
            {"norm":"11","class":[0,0],"residue_char":11},
            {"norm":"13","class":[1,2],"residue_char":13},
            {"norm":"17","class":[0,3],"residue_char":17},
            {"norm":"19","class":[1,0],"residue_char":19},
            {"norm":"23","class":[0,1],"residue_char":23},
            {"norm":"29","class":[1,1],"residue_char":29}]}"#,
    );
    let report = dir.path().join("r.json");
    let o = kclass(&["roundtrip", "--spec", &spec, "--primes", "40", "--zeta", "30", "-o", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&report)["passed"], true);
}

#[test]
fn compare_exit_codes() {
    let o = kclass(&["compare", "-D", "-20", "-D2", "-20", "--bound", "50"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = kclass(&["compare", "-D", "-23", "--disc2", "-47", "--bound", "50"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["equivalent"], false);
}

#[test]
fn starved_bundle_exits_with_insufficient_data() {
    let dir = TempDir::new().unwrap();
    let b = write(
        &dir,
        "s.json",
        r#"{"version":"kclass-bundle/1","rank":3,"entries":[{"labels":[],"factors":["0","0","0"]}]}"#,
    );
    let o = kclass(&["reconstruct", &b]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("insufficient"));
}

#[test]
fn malformed_inputs_fail() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "bad.json", "{");
    assert_eq!(code(&kclass(&["reconstruct", &broken])), 1);
    let version = write(&dir, "v.json", r#"{"version":"kclass-bundle/0","rank":1,"entries":[]}"#);
    let o = kclass(&["reconstruct", &version]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("version"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&kclass(&["classgroup", "-D", "5"])), 2);
    assert_eq!(code(&kclass(&["classgroup", "-D", "-12"])), 2);
    assert_eq!(code(&kclass(&["frobnicate"])), 2);
    assert_eq!(code(&kclass(&["reconstruct", "b.json", "--tie", "sideways"])), 2);
    assert_eq!(code(&kclass(&["invariants", "-D", "-23", "--set", "p_4"])), 2);
}

#[test]
fn each_set_flag_is_its_own_entry() {
    let dir = TempDir::new().unwrap();
    let bundle = dir.path().join("b.json");
    let b = bundle.to_str().unwrap();
    let o = kclass(&["invariants", "-D", "-23", "--set", "p_2,p_3", "--set", "p_2,p_3'", "-o", b]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&bundle);
    let sets: Vec<Value> = v["entries"].as_array().unwrap().iter().map(|e| e["labels"].clone()).collect();
    // p_2, p_3, p_3' carry labels 0, 2, 3
    assert!(sets.contains(&serde_json::json!([0, 2])), "{sets:?}");
    assert!(sets.contains(&serde_json::json!([0, 3])), "{sets:?}");
    assert!(!sets.contains(&serde_json::json!([0, 2, 3])), "{sets:?}");
    let o = kclass(&["reconstruct", b]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}
