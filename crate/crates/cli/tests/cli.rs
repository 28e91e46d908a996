use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn qml_with_env(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qml"));
    cmd.args(args).env_remove("QML_LIMIT").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn qml(args: &[&str], stdin: Option<&str>) -> Run {
    qml_with_env(args, stdin, &[])
}

#[test]
fn mutate_reads_stdin_and_writes_the_file_format() {
    // the first step of the non-member triangle's chain lands on the line
    let run = qml(&["mutate", "--vertex", "2", "--power", "1"], Some(&fixture_text("triangle_non_member_m2.json")));
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout, fixture_text("a3_m2_members/line_00.json"));
}

#[test]
fn mutate_power_three_does_not_return_outside_the_class() {
    let triangle = fixture_text("triangle_non_member_m2.json");
    let run = qml(&["mutate", "--vertex", "2", "--power", "3"], Some(&triangle));
    assert_eq!(run.code, 0);
    assert_ne!(run.stdout, triangle);
    let star = fixture_path("star_m2.json");
    let run = qml(&["mutate", star.to_str().unwrap(), "--vertex", "1", "--power", "3"], None);
    assert_eq!(run.stdout, fixture_text("star_m2.json"));
}

#[test]
fn mutate_applies_sequence_files_and_the_formula_route() {
    let dir = std::env::temp_dir().join(format!("qml-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seq = dir.join("seq.json");
    std::fs::write(&seq, r#"{"steps":[{"vertex":2,"power":1},{"vertex":1,"power":2},{"vertex":1,"power":1}]}"#)
        .unwrap();
    let line = fixture_text("a3_m2_members/line_00.json");
    let via_seq = qml(&["mutate", "--sequence", seq.to_str().unwrap()], Some(&line));
    let single = qml(&["mutate", "--vertex", "2"], Some(&line));
    assert_eq!(via_seq.code, 0, "{}", via_seq.stderr);
    assert_eq!(via_seq.stdout, single.stdout);
    let formula = qml(&["mutate", "--vertex", "2", "--formula"], Some(&line));
    assert_eq!(formula.stdout, single.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn enumerate_small_class() {
    let run = qml(&["enumerate", "--n", "3", "--m", "2"], None);
    assert_eq!(run.code, 0);
    let v = run.json();
    assert_eq!(v["count"], 7);
    assert_eq!(v["representatives"].as_array().unwrap().len(), 7);
    assert_eq!(v["representatives"][0].to_string(), fixture_text("a3_m2_members/line_00.json").trim_end());
    assert!(run.stderr.contains("7 isomorphism classes"));

    let graph =
        qml(&["enumerate", "--n", "3", "--m", "2", "--emit-orbit-graph", "json", "--check-membership"], None).json();
    assert_eq!(graph["orbit_graph"]["nodes"], 7);
    assert_eq!(graph["orbit_graph"]["edges"].as_array().unwrap().len(), 21);
    assert_eq!(graph["closure_failures"], json!([]));
    assert_eq!(graph["membership_checked"], 22);

    let dot = qml(&["enumerate", "--n", "3", "--m", "2", "--emit-orbit-graph", "dot", "--sequential"], None).json();
    assert!(dot["orbit_graph"].as_str().unwrap().starts_with("digraph orbit {"));
}

#[test]
fn enumerate_from_a_seed_file() {
    let seed = fixture_path("a3_m2_members/triangle.json");
    let v = qml(&["enumerate", "--seed", seed.to_str().unwrap()], None).json();
    assert_eq!(v["count"], 7);
    assert_eq!(v["n"], 3);
}

#[test]
fn limit_comes_from_the_environment_unless_flagged() {
    let run = qml_with_env(&["enumerate", "--n", "3", "--m", "2"], None, &[("QML_LIMIT", "3")]);
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["limit"], 3);
    let run = qml_with_env(&["enumerate", "--n", "3", "--m", "2", "--limit", "7"], None, &[("QML_LIMIT", "3")]);
    assert_eq!(run.code, 0);
    let run = qml_with_env(&["enumerate", "--n", "3", "--m", "2"], None, &[("QML_LIMIT", "many")]);
    assert_eq!(run.code, 2);
    assert!(run.json()["error"].as_str().unwrap().contains("QML_LIMIT"));
}

#[test]
fn classify_reports_verdicts() {
    let path = fixture_path("thirteen_vertex_m2.json");
    let run = qml(&["classify", path.to_str().unwrap()], None);
    assert_eq!(run.code, 0);
    assert_eq!(run.json(), json!({"member": true, "failures": []}));

    let run = qml(&["classify"], Some(&fixture_text("star_m2.json")));
    assert_eq!(run.code, 0);
    let v = run.json();
    assert_eq!(v["member"], false);
    assert_eq!(v["failures"][0], json!({"kind": "bad_vertex_split", "vertex": 1}));
}

#[test]
fn analyze_the_thirteen_vertex_quiver() {
    let path = fixture_path("thirteen_vertex_m2.json");
    let v = qml(&["analyze", path.to_str().unwrap()], None).json();
    assert_eq!(v["member"], true);
    assert_eq!(v["clique_number"], json!({"omega": 4, "bound": 4, "within_bound": true}));
    assert_eq!(v["energy"]["all_pass"], true);
    assert_eq!(v["zero_part"]["cycles"], json!([[1, 4, 2, 5], [5, 6, 10, 9]]));
    assert_eq!(v["zero_part"]["cycle_check"]["pass"], true);

    let only = qml(&["analyze", path.to_str().unwrap(), "--zero-part", "dot"], None).json();
    assert!(only.get("energy").is_none());
    assert!(only["zero_part"]["dot"].as_str().unwrap().contains("->"));
    let bare = qml(&["analyze", path.to_str().unwrap(), "--zero-part", "--clique-number"], None).json();
    assert!(bare["zero_part"].get("dot").is_none());
    assert_eq!(bare["clique_number"]["omega"], 4);
}

#[test]
fn analyze_non_members_skips_member_only_checks() {
    let v = qml(&["analyze", "--energy", "--zero-part"], Some(&fixture_text("triangle_non_member_m2.json"))).json();
    assert_eq!(v["member"], false);
    assert_eq!(v["energy"]["all_pass"], false);
    assert_eq!(v["zero_part"]["cycle_check"], Value::Null);
}

#[test]
fn reduce_and_verify() {
    let path = fixture_path("thirteen_vertex_m2.json");
    let run = qml(&["reduce", path.to_str().unwrap(), "--verify"], None);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let v = run.json();
    assert_eq!(v["verified"], true);
    assert_eq!(v["line"]["arrows"].as_array().unwrap().len(), 12);
    assert!(!v["sequence"]["steps"].as_array().unwrap().is_empty());

    let run = qml(&["reduce"], Some(&fixture_text("star_m2.json")));
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["verdict"]["member"], false);
}

#[test]
fn verify_a_single_case() {
    let run = qml(&["verify", "--case", "3,2"], None);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let v = run.json();
    assert_eq!(v["pass"], true);
    let checks = &v["cases"][0]["checks"];
    for name in ["class_equals_members", "closure", "period", "energy", "clique_bound", "zero_part", "reduction"] {
        assert_eq!(checks[name]["pass"], true, "{name}");
    }
    assert_eq!(checks["class_equals_members"]["class_size"], 7);
    assert!(run.stderr.contains("n=3 m=2: ok"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qml(&["frobnicate"], None).code, 2);
    assert_eq!(qml(&["mutate"], Some("{}")).code, 2);
    assert_eq!(qml(&["enumerate", "--n", "3"], None).code, 2);
    assert_eq!(qml(&["verify", "--case", "3"], None).code, 2);
    assert_eq!(qml(&["--help"], None).code, 0);
}

#[test]
fn domain_errors_exit_with_one_and_a_json_error() {
    let bad = qml(&["classify"], Some("{\"m\":2"));
    assert_eq!(bad.code, 1);
    assert!(bad.json()["error"].is_string());
    let out_of_range = qml(&["mutate", "--vertex", "9"], Some(&fixture_text("star_m2.json")));
    assert_eq!(out_of_range.code, 1);
    assert!(out_of_range.json()["error"].as_str().unwrap().contains("vertex 9"));
    let missing = qml(&["classify", "/nonexistent/q.json"], None);
    assert_eq!(missing.code, 1);
    assert!(missing.json()["error"].as_str().unwrap().contains("/nonexistent/q.json"));
}
