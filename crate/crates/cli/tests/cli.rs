use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_transversal"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn write_table(dir: &Path, name: &str, table: &[Vec<usize>]) -> String {
    let labels: Vec<String> = (0..table.len()).map(|i| i.to_string()).collect();
    let text = serde_json::json!({"labels": labels, "identity": 0, "table": table}).to_string();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

#[test]
fn s3_reflection_subgroup() {
    let o = run(&["transversals", "S3", "--subgroup", "{e,(12)}"]);
    assert_eq!(o.status.code(), Some(0));
    let ls = lines(&o);
    assert_eq!(ls.iter().filter(|l| l["check"] == "transversal").count(), 4);
    let classes = ls.iter().find(|l| l["check"] == "isomorphism_classes").unwrap();
    assert_eq!(classes["classes"], 3);
    assert_eq!(ls.last().unwrap()["summary"], "transversals");
    assert_eq!(ls.last().unwrap()["pass"], true);
}

#[test]
fn whole_group_subgroup_gives_trivial_transversal() {
    let o = run(&["transversals", "S3", "--subgroup", "{(12),(123)}"]);
    assert_eq!(o.status.code(), Some(0));
    let ls = lines(&o);
    let ts: Vec<_> = ls.iter().filter(|l| l["check"] == "transversal").collect();
    assert_eq!(ts.len(), 1);
    assert_eq!(ts[0]["reps"], serde_json::json!(["e"]));
}

#[test]
fn subgroup_and_group_files() {
    let dir = tempfile::tempdir().unwrap();
    let group = write_table(dir.path(), "z6.json", &cyclic(6));
    let sub = dir.path().join("h.json");
    fs::write(&sub, r#"{"members": [0, 3]}"#).unwrap();
    let o = run(&["transversals", &group, "--subgroup", sub.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // index 3, cosets of size 2: 4 transversals
    assert_eq!(lines(&o).iter().filter(|l| l["check"] == "transversal").count(), 4);

    fs::write(&sub, r#"{"members": [0, 2]}"#).unwrap();
    let o = run(&["transversals", &group, "--subgroup", sub.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_json_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"labels\": [").unwrap();
    let o = run(&["transversals", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
    let o = run(&["extension", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["extension", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // column 1 is not a bijection
    let q = write_table(dir.path(), "q.json", &[vec![0, 1, 2], vec![1, 0, 1], vec![2, 0, 0]]);
    assert_eq!(run(&["extension", &q]).status.code(), Some(1));
    assert_eq!(run(&["transversals", "S3", "--subgroup", "{(14)}"]).status.code(), Some(1));
    assert_eq!(run(&["transversals", "S3", "--cap-closure", "0"]).status.code(), Some(1));
    assert_eq!(run(&["cayley", "--dim", "3"]).status.code(), Some(1));
    assert_eq!(run(&["sphere", "--dim", "2", "--format", "csv"]).status.code(), Some(1));
}

#[test]
fn extension_orders_and_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write_table(dir.path(), "q3.json", &[vec![0, 1, 2], vec![1, 2, 1], vec![2, 0, 0]]);
    let out = dir.path().join("g.json");
    let o = run(&["extension", &q3, "--universal-out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let ls = lines(&o);
    let order = |check: &str| ls.iter().find(|l| l["check"] == check).unwrap()["checks"]["order"].clone();
    assert_eq!(order("torsion_extension"), 6);
    assert_eq!(order("universal_extension"), 6);
    let g: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g["table"].as_array().unwrap().len(), 6);
    assert_eq!(g["labels"][0], "()|0");

    // the written table is a group the tool accepts
    let o = run(&["transversals", out.to_str().unwrap(), "--subgroup", "{()|0}"]);
    assert_eq!(o.status.code(), Some(0));

    let z4 = write_table(dir.path(), "z4.json", &cyclic(4));
    let ls = lines(&run(&["extension", &z4]));
    let order = |check: &str| ls.iter().find(|l| l["check"] == check).unwrap()["checks"]["order"].clone();
    assert_eq!(order("torsion_extension"), 4);
    assert_eq!(order("universal_extension"), 24);
}

#[test]
fn extension_cap_exceeded() {
    let dir = tempfile::tempdir().unwrap();
    let z9 = write_table(dir.path(), "z9.json", &cyclic(9));
    let o = run(&["extension", &z9]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap exceeded"));
}

#[test]
fn sphere_and_cayley_suites() {
    let o = run(&["sphere", "--dim", "5", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["sphere", "--dim", "2", "--samples", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let ls = lines(&o);
    let d = ls.iter().find(|l| l["check"] == "discontinuity_certificate").unwrap();
    assert_eq!(d["skipped"], "needs n >= 3");

    let o = run(&["cayley", "--dim", "8", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let ls = lines(&o);
    let a = ls.iter().find(|l| l["check"] == "cayley_associativity").unwrap();
    assert_eq!(a["associative"], false);
    assert!(a["witness_residual"].as_f64().unwrap() > 0.5);
}

#[test]
fn impossible_tolerance_is_property_violation() {
    let o = run(&["sphere", "--dim", "3", "--samples", "200", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(lines(&o).last().unwrap()["pass"] == false);
}

#[test]
fn csv_discontinuity() {
    let o = run(&["sphere", "--dim", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "epsilon,distance,base_point_distance,branch");
    assert_eq!(rows.len(), 5);
    assert!(rows[4].starts_with("0.00001,2,"));
}

#[test]
fn reports_are_byte_identical_and_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["sphere", "--dim", "3", "--samples", "1000", "--seed", "7"],
        vec!["cayley", "--dim", "4", "--samples", "1000", "--seed", "7"],
        vec!["transversals", "D4", "--seed", "7"],
        vec!["transversals", "S4", "--subgroup", "{(12)}", "--cap-enum", "100", "--samples", "30", "--seed", "7"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout);
        let out = dir.path().join("r.jsonl");
        let mut with_out = args.clone();
        with_out.extend(["--out", out.to_str().unwrap()]);
        let c = run(&with_out);
        assert!(c.stdout.is_empty());
        assert_eq!(fs::read(&out).unwrap(), a.stdout);
    }
    let a = run(&["sphere", "--dim", "3", "--samples", "1000", "--seed", "7"]);
    let b = run(&["sphere", "--dim", "3", "--samples", "1000", "--seed", "8"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn sampled_mode_when_enumeration_capped() {
    let o = run(&["transversals", "S4", "--subgroup", "{(12)}", "--cap-enum", "100", "--samples", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let ls = lines(&o);
    let classes = ls.iter().find(|l| l["check"] == "isomorphism_classes").unwrap();
    assert_eq!(classes["mode"], "sampled");
    assert_eq!(classes["transversal_count"], 2048);
    assert!(classes["transversals"].as_u64().unwrap() <= 30);
}

#[test]
fn catalog_name_shadowing_file_warns() {
    let dir = tempfile::tempdir().unwrap();
    write_table(dir.path(), "S3", &cyclic(2));
    let o = bin()
        .current_dir(dir.path())
        .args(["transversals", "S3", "--subgroup", "{e}"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    // the catalog S3, not the file's Z2, was used
    assert_eq!(lines(&o).iter().filter(|l| l["check"] == "transversal").count(), 1);
    assert_eq!(lines(&o)[0]["n"], 6);
}
