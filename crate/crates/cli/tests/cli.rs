use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn unionsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unionsys")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bound_reports_value_and_case() {
    let out = unionsys(&["bound", "--st", "--n", "3", "--s", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "bound");
    assert_eq!(v["outputs"]["value"]["value"], 4);
    assert_eq!(v["outputs"]["case"], "st-1-1");
    assert_eq!(v["provenance"][0]["source"], "st-1-1");

    let out = unionsys(&["bound", "--st", "--n", "6", "--s", "2", "--t", "3"]);
    let v = json(&out);
    assert_eq!(v["outputs"]["value"]["kind"], "interval");
    assert_eq!(v["outputs"]["value"]["lower"], 47);

    let out = unionsys(&["bound", "--ak", "--n", "7", "--k", "3", "--l", "1"]);
    assert_eq!(json(&out)["outputs"]["value"]["value"], 15);
}

#[test]
fn verify_reports_witness() {
    let dir = TempDir::new().unwrap();
    // pairwise unions of these four sets all have three or more points
    let crossing = write(&dir, "crossing.json", r#"{"n": 4, "sets": [[1,2],[3,4],[1,3],[2,4]]}"#);
    let out = unionsys(&["verify", "--union-l", "1", "--family", &crossing]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outputs"]["pass"], true);

    let points = write(&dir, "points.json", r#"{"n": 4, "sets": [[1],[2],[3],[4]]}"#);
    let out = unionsys(&["verify", "--union-l", "1", "--family", &points]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["outputs"]["pass"], false);
    assert_eq!(v["outputs"]["witness"]["left"], serde_json::json!([[1], [2]]));
    assert_eq!(v["outputs"]["witness"]["overlap"], 0);

    let out = unionsys(&["verify", "--st", "--s", "1", "--t", "1", "--family", &points]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 7] = [
        &["--union-l", "2", "--n", "5"],
        &["--union-l", "1", "--n", "6"],
        &["--st", "--n", "5", "--s", "1", "--t", "3"],
        &["--st", "--n", "6", "--s", "2", "--t", "2"],
        &["--st", "--n", "5", "--s", "2", "--t", "3"],
        &["--uniform", "--n", "7", "--k", "3", "--s", "2", "--t", "2"],
        &["--ak", "--n", "8", "--k", "4", "--l", "2"],
    ];
    for (idx, flags) in cases.iter().enumerate() {
        let file = dir.path().join(format!("c{idx}.json"));
        let mut args = vec!["construct", "--out", path_str(&file)];
        args.extend_from_slice(flags);
        let out = unionsys(&args);
        assert_eq!(out.status.code(), Some(0), "{flags:?}");
        let size = json(&out)["outputs"]["size"].as_u64().unwrap();

        let mut args = vec!["verify", "--family", path_str(&file)];
        args.extend_from_slice(flags);
        let out = unionsys(&args);
        assert_eq!(out.status.code(), Some(0), "{flags:?}");
        assert_eq!(json(&out)["outputs"]["size"].as_u64(), Some(size));
    }
}

#[test]
fn search_agrees_with_bound() {
    let out = unionsys(&["search", "--st", "--n", "5", "--s", "1", "--t", "3", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["optimum"], 22);
    assert_eq!(v["outputs"]["matches-bound"], true);
    assert_eq!(v["outputs"]["method"], "UpsetEnum");
    assert_eq!(v["outputs"]["witness"]["sets"].as_array().unwrap().len(), 22);
    assert!(v["outputs"]["elapsed-ms"].is_u64());
    assert!(v["outputs"]["nodes"].is_u64());

    let out = unionsys(&["search", "--uniform", "--n", "6", "--k", "2", "--s", "2", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["optimum"], 10);
    assert_eq!(v["outputs"]["matches-bound"], Value::Null);

    let out = unionsys(&["search", "--union-l", "1", "--n", "3", "--method", "full"]);
    assert_eq!(json(&out)["outputs"]["optimum"], 7);

    let out = unionsys(&["search", "--st", "--n", "5", "--s", "1", "--t", "1", "--method", "full"]);
    assert_eq!(out.status.code(), Some(2));
    let out = unionsys(&["search", "--st", "--n", "6", "--s", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = unionsys(&["search", "--st", "--n", "6", "--s", "1", "--t", "1", "--allow-n6"]);
    assert_eq!(json(&out)["outputs"]["optimum"], 32);
}

#[test]
fn search_witness_file_is_canonical() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("w.json");
    let out = unionsys(&["search", "--st", "--n", "4", "--s", "2", "--t", "2", "--out", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap();
    let f = unionsys::io::parse_family(&text).unwrap();
    assert_eq!(f.len(), 12);
    assert_eq!(unionsys::io::to_canonical_json(&f), text);
}

#[test]
fn level_checks() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("u.json");
    let out = unionsys(&["construct", "--union-l", "2", "--n", "4", "--out", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let out = unionsys(&["verify-levels", "--family", path_str(&file), "--l", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["pass"], true);
    assert_eq!(v["outputs"]["rows"].as_array().unwrap().len(), 2);

    let all = write(&dir, "all.json", r#"{"n": 3, "sets": [[],[1],[2],[3],[1,2],[1,3],[2,3],[1,2,3]]}"#);
    let out = unionsys(&["verify-levels", "--family", &all, "--l", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["outputs"]["precondition"].is_string());

    let upper = write(&dir, "upper.json", r#"{"n": 5, "sets": [[1,2,3],[1,2,4],[1,2,5],[1,3,4],[1,3,5],[1,4,5],[2,3,4],[2,3,5],[2,4,5],[3,4,5],[1,2,3,4],[1,2,3,5],[1,2,4,5],[1,3,4,5],[2,3,4,5],[1,2,3,4,5]]}"#);
    let out = unionsys(&["verify-levels", "--family", &upper, "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = unionsys(&["verify-levels", "--family", &upper]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sunflower_command() {
    let dir = TempDir::new().unwrap();
    let triangle = write(&dir, "tri.json", r#"{"n": 3, "sets": [[1,2],[1,3],[2,3]]}"#);
    let out = unionsys(&["sunflower", "--family", &triangle, "--petals", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["found"], false);
    assert_eq!(v["outputs"]["message"], "none found (size 3 <= threshold 8)");

    let star = write(&dir, "star.json", r#"{"n": 5, "sets": [[1,2,3],[1,2,4],[1,2,5]]}"#);
    let out = unionsys(&["sunflower", "--family", &star, "--petals", "3"]);
    let v = json(&out);
    assert_eq!(v["outputs"]["center"], serde_json::json!([1, 2]));
    assert_eq!(v["outputs"]["petals"].as_array().unwrap().len(), 3);

    let mixed = write(&dir, "mixed.json", r#"{"n": 3, "sets": [[1],[2,3]]}"#);
    assert_eq!(unionsys(&["sunflower", "--family", &mixed, "--petals", "2"]).status.code(), Some(2));
}

#[test]
fn reproduce_passes_and_is_deterministic() {
    let a = unionsys(&["reproduce", "--max-n", "4", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    let b = unionsys(&["reproduce", "--max-n", "4", "--seed", "5", "--threads", "3"]);
    // thread count does not change the report
    let v = json(&a);
    assert_eq!(v["outputs"], json(&b)["outputs"]);
    assert_eq!(v["outputs"]["pass"], true);
    assert_eq!(v["outputs"]["grid"].as_array().unwrap().len(), 18);
    assert_eq!(unionsys(&["reproduce", "--max-n", "7"]).status.code(), Some(2));
}

#[test]
fn text_format_renders_the_same_numbers() {
    let out = unionsys(&["--format", "text", "bound", "--union-l", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: bound\n"));
    assert!(text.contains("case: union-l-odd\n"));
    assert!(text.contains("value: 17\n"));
}

#[test]
fn json_is_byte_stable() {
    let args = ["construct", "--st", "--n", "5", "--s", "1", "--t", "2"];
    assert_eq!(unionsys(&args).stdout, unionsys(&args).stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(unionsys(&["bound", "--n", "3"]).status.code(), Some(2));
    assert_eq!(unionsys(&["bound", "--st", "--union-l", "1", "--n", "3", "--s", "1", "--t", "1"]).status.code(), Some(2));
    assert_eq!(unionsys(&["bound", "--st", "--n", "3", "--s", "1"]).status.code(), Some(2));
    assert_eq!(unionsys(&["frobnicate"]).status.code(), Some(2));
    let out = unionsys(&["verify", "--st", "--s", "1", "--t", "1", "--family", "/nonexistent/f.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading"));
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"n": 3, "sets": [[2,1]]}"#);
    assert_eq!(unionsys(&["verify", "--union-l", "1", "--family", &bad]).status.code(), Some(2));
}
