use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hssp")).args(args).output().expect("spawn hssp")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_instance(dir: &Path, name: &str, n: u32, k: u32, sums: &[i64]) -> String {
    let sums: Vec<String> = sums.iter().map(|v| v.to_string()).collect();
    let path = dir.join(name);
    fs::write(&path, serde_json::json!({"n": n, "k": k, "sums": sums}).to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solves_five_by_two() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(dir.path(), "i.json", 5, 2, &[3, 4, 5, 5, 6, 6, 7, 7, 8, 9]);
    let report = dir.path().join("r.json");
    let out = hssp(&["solve", "--algo", "vieta", "--in", &inst, "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("solution 1: 1 2 3 4 5"));
    let rep: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["status"], "unique");
    assert_eq!(rep["solutions"][0], serde_json::json!(["1", "2", "3", "4", "5"]));
    assert_eq!(rep["moser"]["values"][0]["value"], "4");
}

#[test]
fn singular_pair_exits_two_and_brute_lists_both() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(dir.path(), "i.json", 4, 2, &[5, 6, 7, 9, 10, 11]);
    let out = hssp(&["solve", "--algo", "vieta", "--in", &inst]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("singular u: [3]"));

    let report = dir.path().join("r.json");
    let out = hssp(&["solve", "--algo", "brute", "--all", "--in", &inst, "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["status"], "multiple");
    let sols = rep["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    // every reported solution verifies
    for (i, s) in sols.iter().enumerate() {
        let path = dir.path().join(format!("s{i}.json"));
        fs::write(&path, serde_json::json!({ "elements": s }).to_string()).unwrap();
        let out = hssp(&["verify", "--in", &inst, "--solution", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
}

#[test]
fn no_solution_and_inconsistent_codes() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(dir.path(), "i.json", 4, 2, &[1, 1, 1, 1, 1, 100]);
    assert_eq!(code(&hssp(&["solve", "--algo", "brute", "--in", &inst])), 1);

    let inst = write_instance(dir.path(), "j.json", 5, 2, &[3, 4, 5, 5, 7, 6, 7, 7, 8, 9]);
    assert_eq!(code(&hssp(&["solve", "--algo", "vieta", "--in", &inst])), 4);
}

#[test]
fn malformed_input_exits_three() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(dir.path(), "i.json", 5, 2, &[1; 9]);
    let out = hssp(&["solve", "--algo", "vieta", "--in", &inst]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
    assert_eq!(code(&hssp(&["solve", "--algo", "nope", "--in", &inst])), 3);
    assert_eq!(code(&hssp(&["generate", "--n", "5", "--k", "2", "--seed", "1", "--out", "x.json"])), 3);
}

#[test]
fn generate_is_reproducible_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let truth = dir.path().join("t.json");
    for path in [&a, &b] {
        let out = hssp(&[
            "generate", "--n", "7", "--k", "3", "--seed", "42", "--int-range", "-20", "20", "--out",
            path.to_str().unwrap(), "--truth", truth.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let out = hssp(&["verify", "--in", a.to_str().unwrap(), "--solution", truth.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let out = hssp(&["solve", "--algo", "vieta", "--in", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let t: Value = serde_json::from_str(&fs::read_to_string(&truth).unwrap()).unwrap();
    let mut want: Vec<i64> = t["elements"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse().unwrap()).collect();
    want.sort();
    let line = want.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    assert!(stdout(&out).contains(&line), "{}", stdout(&out));
}

#[test]
fn float_generate_and_solve() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("f.json");
    let out = hssp(&["generate", "--n", "8", "--k", "3", "--seed", "9", "--unit-float", "--out", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    for algo in ["vieta", "brute"] {
        let out = hssp(&["solve", "--algo", algo, "--in", inst.to_str().unwrap(), "--jobs", "2"]);
        assert_eq!(code(&out), 0, "{algo}: {}", stdout(&out));
        assert!(stdout(&out).contains("mode = float"));
    }
}

#[test]
fn singular_generation_is_flagged() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("s.json");
    let out = hssp(&["generate", "--n", "4", "--k", "2", "--seed", "1", "--int-range", "1", "9", "--out", inst.to_str().unwrap()]);
    assert!(stdout(&out).contains("singular pair (4,2)"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&inst).unwrap()).unwrap();
    assert!(v["warnings"][0].as_str().unwrap().starts_with("singular pair (4,2)"));
}

#[test]
fn check_singular_and_moser() {
    let out = hssp(&["check-singular", "--k", "2", "--n-max", "70"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[4, 8, 16, 32, 64]"));
    let out = hssp(&["check-singular", "--k", "2", "--n", "8"]);
    assert!(stdout(&out).contains("singular at u = [4]"));
    let out = hssp(&["moser", "--n", "5", "--k", "2", "--u", "5"]);
    assert_eq!(stdout(&out).trim(), "-11");
    assert_eq!(code(&hssp(&["moser", "--n", "3", "--k", "5", "--u", "1"])), 3);
}

#[test]
fn verify_rejects_wrong_candidate() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(dir.path(), "i.json", 5, 2, &[3, 4, 5, 5, 6, 6, 7, 7, 8, 9]);
    let sol = dir.path().join("s.json");
    fs::write(&sol, r#"{"elements":["1","2","3","4","6"]}"#).unwrap();
    let out = hssp(&["verify", "--in", &inst, "--solution", sol.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("mismatch"));
}
