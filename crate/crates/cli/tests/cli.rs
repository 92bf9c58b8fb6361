use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn gradlca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradlca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_symbolic_cl2() {
    let out = gradlca(&["verify", "--family", "cl2", "--param", "b=free", "--param", "s=free", "--window", "-6..6"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn verify_mutated_fixture_names_a_triple() {
    let out = gradlca(&["verify", "--file", &fixture("mutated_v.json"), "--window", "-3..3"]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    let entries = v["report"]["checks"].as_array().unwrap();
    let fail = entries
        .iter()
        .find(|e| e["status"] == "fail" && e["check"] == "jacobi")
        .expect("a failing Jacobi entry");
    assert_eq!(fail["locus"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_vir_and_module() {
    assert_eq!(code(&gradlca(&["verify", "--family", "vir"])), 0);
    let out = gradlca(&["verify", "--family", "vir", "--module", "mab", "--param", "a=1", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
}

#[test]
fn ideals_of_ecl() {
    let out = gradlca(&["ideals", "--family", "ecl", "--param", "s=free", "--window", "-5..5"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let ideals = v["ideals"].as_array().unwrap();
    assert_eq!(ideals.len(), 3);
    for i in ideals {
        assert_eq!(i["proper"], true);
        assert_eq!(i["is_ideal"], true);
        assert_eq!(i["witness_verified"], true);
    }
}

#[test]
fn ideals_of_scl2_and_vir() {
    let out = gradlca(&["ideals", "--family", "scl2", "--param", "b=1/2", "--param", "s=free"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["ideals"][0]["is_ideal"], true);
    assert_eq!(v["ideals"][0]["parts"]["-1"], "d + 2*s");

    let out = gradlca(&["ideals", "--family", "vir"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["ideals"].as_array().unwrap().len(), 0);
}

#[test]
fn classify_paths() {
    let out = gradlca(&["classify", "--family", "cl3", "--param", "s=7/2", "--window", "-4..4"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["tag"], "CL3");
    assert_eq!(v["s"], "7/2");
    assert!(v["witness"]["multipliers"].is_object());

    let out = gradlca(&["classify", "--file", &fixture("degsum1_seed.json")]);
    assert_eq!(code(&out), 3);
    let v = json_of(&out);
    assert_eq!(v["tag"], "Impossible");
    assert_eq!(v["certificate"]["valid"], true);

    let out = gradlca(&["classify", "--family", "cur-sl2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["tag"], "CurSl2");

    assert_eq!(code(&gradlca(&["classify", "--family", "vir"])), 1);
}

#[test]
fn derive_paths() {
    let out = gradlca(&["derive", "basic", "--family", "vir"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["constants"].as_array().unwrap().len(), 0);

    let out = gradlca(&["derive", "annihilate", "--family", "vir", "--max-index", "10"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["dim"], 11);
    for c in v["constants"].as_array().unwrap() {
        let m: i64 = c["lhs"].as_str().unwrap()[2..].trim_end_matches(']').parse().unwrap();
        let n: i64 = c["rhs"].as_str().unwrap()[2..].trim_end_matches(']').parse().unwrap();
        let label = format!("L[{}]", m + n - 1);
        assert_eq!(c["value"][&label], (m - n).to_string(), "{c}");
    }

    let out = gradlca(&["derive", "basic", "--family", "v", "--param", "s=0", "--window", "-3..3", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("abelian"));
}

#[test]
fn extend_paths() {
    let out = gradlca(&["extend", "--family", "cl2", "--param", "b=0", "--param", "s=1", "--window", "-3..3"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["outcome"], "table");
    assert_eq!(v["algebra"]["support"]["window"], serde_json::json!([-3, 3]));

    let out = gradlca(&["extend", "--file", &fixture("degsum1_seed.json"), "--format", "text"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("inconsistent linear system"));
}

#[test]
fn malformed_inputs_exit_2() {
    assert_eq!(code(&gradlca(&["verify", "--family", "nope"])), 2);
    assert_eq!(code(&gradlca(&["verify", "--family", "v", "--param", "q=1"])), 2);
    assert_eq!(code(&gradlca(&["verify", "--family", "v", "--param", "s=abc"])), 2);
    assert_eq!(code(&gradlca(&["verify", "--family", "v", "--window", "3..1"])), 2);
    assert_eq!(code(&gradlca(&["verify", "--family", "v", "--window", "3"])), 2);
    assert_eq!(code(&gradlca(&["verify"])), 2);
    assert_eq!(code(&gradlca(&["verify", "--file", "/nonexistent.json"])), 2);
    assert_eq!(code(&gradlca(&["classify", "--file", &fixture("mutated_v.json")])), 2);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["classify", "--family", "ecl", "--window", "-3..3"];
    let a = gradlca(&args);
    let b = gradlca(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.display().to_string();
    let mut with_out = args.to_vec();
    with_out.extend(["--out", &p]);
    let c = gradlca(&with_out);
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}
