use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sdecomp"))
}

fn write(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], src: &str) -> Output {
    let f = write(src);
    bin().args(args).arg(f.path()).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const TRIANGLE: &str = "diagram 3\n1 2 2\n2 3 2\n3 1 4\n";
const A3: &str = "3\n0 1 0\n-1 0 1\n0 -1 0\n";

#[test]
fn oriented_triangle_has_two_decompositions() {
    let o = run(&["check"], TRIANGLE);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "sdecomp.check");
    assert_eq!(v["s_decomposable"], true);
    assert_eq!(v["decompositions"].as_array().unwrap().len(), 2);
}

#[test]
fn first_stops_after_one() {
    let o = run(&["check", "--first"], TRIANGLE);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["decompositions"].as_array().unwrap().len(), 1);
}

#[test]
fn weight_three_is_rejected_by_weight_rule() {
    let o = run(&["check"], "diagram 2\n1 2 3\n");
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["s_decomposable"], false);
    assert_eq!(v["reject_certificate"]["rule"], "weight");
    assert_eq!(v["reject_certificate"]["weight"], 3);
}

#[test]
fn trace_reports_examinations() {
    let o = run(&["check", "--trace"], TRIANGLE);
    let v = json(&o);
    assert!(v["trace"]["total_examinations"].as_u64().unwrap() <= 6);
}

#[test]
fn double_mutation_returns_input() {
    for src in [A3, TRIANGLE] {
        let o = run(&["mutate", "--seq", "1,1", "--format", "text"], src);
        assert_eq!(o.status.code(), Some(0));
        let again = run(
            &["mutate", "--seq", "2", "--format", "text"],
            &String::from_utf8(o.stdout).unwrap(),
        );
        let back = run(
            &["mutate", "--seq", "2", "--format", "text"],
            &String::from_utf8(again.stdout).unwrap(),
        );
        let direct = run(&["mutate", "--seq", "1,1", "--format", "text"], src);
        assert_eq!(back.stdout, direct.stdout);
    }
    let o = run(&["mutate", "--seq", "1,1", "--format", "text"], A3);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "3\n0 1 0\n-1 0 1\n0 -1 0\n"
    );
}

#[test]
fn mutate_rejects_out_of_range_index() {
    let o = run(&["mutate", "--seq", "4"], A3);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn malformed_input_exits_64_with_position() {
    let o = run(&["check"], "2\n0 1\n-1 x\n");
    assert_eq!(o.status.code(), Some(64));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 4"), "{}", err);
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_file_exits_64() {
    let o = bin()
        .args(["check", "/nonexistent/input.txt"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn reads_stdin() {
    let mut child = bin()
        .args(["classify", "--format", "text"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(A3.as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("outcome: finite_s_decomposable"));
}

#[test]
fn classify_exit_codes() {
    let o = run(&["classify"], "diagram 3\n1 2 1\n2 3 1\n3 1 5\n");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["outcome"], "infinite");
    // G2 affine is exceptional; without the catalog it cannot be settled
    let g2 = "diagram 3\n1 2 3\n1 3 1\n";
    let o = run(&["classify"], g2);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["outcome"], "finite_exceptional");
    let o = run(&["classify", "--no-catalog"], g2);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unfold_and_oracle() {
    let o = run(&["unfold"], "diagram 2\n1 2 2\n");
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["labels"].as_array().unwrap().len(), 3);
    let o = run(&["oracle"], TRIANGLE);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["decompositions"].as_array().unwrap().len(), 2);
    let o = run(&["oracle", "--finite"], A3);
    assert_eq!(json(&o)["size"], 4);
}

#[test]
fn dot_export_fills_black_nodes() {
    let o = run(&["export-dot"], "diagram 2\n1 2 2\n");
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("digraph"));
    assert!(s.contains("[label=\"2\"]"));
    assert!(s.contains("fillcolor=black"));
}

#[test]
fn version_prints_catalog_hashes() {
    let o = bin().arg("--version").output().unwrap();
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("blocks.json sha256 "));
    assert!(s.contains("exceptional.json sha256 "));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["check", "--trace"][..],
        &["classify"][..],
        &["unfold"][..],
        &["oracle"][..],
        &["export-dot"][..],
    ] {
        let a = run(args, TRIANGLE);
        let b = run(args, TRIANGLE);
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}
