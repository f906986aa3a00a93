//! End-to-end tests for the `vsc` binary: argument handling, output
//! formats, determinism, and error reporting.

use std::path::Path;
use std::process::{Command, Output};

fn vsc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vsc"))
}

fn run(args: &[&str]) -> Output {
    vsc().args(args).output().expect("spawning vsc")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn gen_dataset(dir: &Path) -> String {
    let path = dir.join("two.csv");
    let out = run(&[
        "gen",
        "twonorm",
        "--n",
        "120",
        "--dim",
        "4",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    stdout_of(&out);
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let out = run(&[
            "gen",
            "xor_blobs",
            "--n",
            "40",
            "--noise",
            "0.2",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        stdout_of(&out);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap(), "same seed, same bytes");
    assert_ne!(bytes_a, std::fs::read(&c).unwrap(), "seed changes the data");
    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "f1,f2,class");
    assert_eq!(text.lines().count(), 41);
}

#[test]
fn gen_rejects_unknown_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "gen",
        "spirals",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown dataset"), "stderr: {err}");
}

#[test]
fn cv_prints_table_and_writes_parseable_records() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let records = dir.path().join("r.jsonl");
    let out = run(&[
        "cv", "--data", &data, "--model", "vsc", "--k", "15", "--folds", "5",
        "--seed", "7", "--out", records.to_str().unwrap(),
    ]);
    let table = stdout_of(&out);
    assert!(table.contains("mean F1"), "table: {table}");
    assert!(table.contains("two.csv"), "table: {table}");

    let text = std::fs::read_to_string(&records).unwrap();
    let line = text.lines().next().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "cv");
    assert_eq!(v["classifier_id"], "vsc");
    assert_eq!(v["dataset_source"], "two.csv");
    assert_eq!(v["fold_f1"].as_array().unwrap().len(), 5);
}

#[test]
fn cv_stdout_formats_render_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let base = [
        "cv", "--data", &data, "--model", "knn", "--neighbors", "3",
        "--folds", "5", "--seed", "7", "--format",
    ];

    let mut args = base.to_vec();
    args.push("json-lines");
    let json = stdout_of(&run(&args));
    let v: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
    assert_eq!(v["classifier_id"], "knn");

    let mut args = base.to_vec();
    args.push("csv");
    let csv = stdout_of(&run(&args));
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("kind,classifier_id"), "header: {header}");
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn cv_records_are_identical_across_reruns_and_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let mut outputs = Vec::new();
    for (name, jobs) in [("a.jsonl", None), ("b.jsonl", None), ("c.jsonl", Some("2"))] {
        let path = dir.path().join(name);
        let mut args = vec![
            "cv", "--data", &data, "--model", "vsc", "--k", "15", "--folds", "5",
            "--seed", "7", "--out", path.to_str().unwrap(),
        ];
        if let Some(j) = jobs {
            args.extend(["--jobs", j]);
        }
        stdout_of(&run(&args));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "rerun must be byte-identical");
    assert_eq!(outputs[0], outputs[2], "--jobs must not change results");
}

#[test]
fn seed_flag_overrides_env_which_overrides_default() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let args = ["cv", "--data", &data, "--model", "knn", "--folds", "5"];

    let by_default = stdout_of(&vsc().args(args).env_remove("VSC_SEED").output().unwrap());
    assert!(by_default.contains("seed 42"), "{by_default}");

    let by_env = stdout_of(&vsc().args(args).env("VSC_SEED", "9").output().unwrap());
    assert!(by_env.contains("seed 9"), "{by_env}");

    let by_flag = stdout_of(
        &vsc()
            .args(args)
            .args(["--seed", "11"])
            .env("VSC_SEED", "9")
            .output()
            .unwrap(),
    );
    assert!(by_flag.contains("seed 11"), "{by_flag}");
}

#[test]
fn cv_rejects_unknown_model_with_runtime_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&["cv", "--data", &data, "--model", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown model"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = run(&["cv", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cv_reads_attribute_header_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.dat");
    let mut text = String::from(
        "@relation tiny\n\
         @attribute a real [-5.0, 5.0]\n\
         @attribute b real [-5.0, 5.0]\n\
         @attribute class {pos, neg}\n\
         @inputs a, b\n\
         @outputs class\n\
         @data\n",
    );
    for i in 0..12 {
        let (v, label) = if i % 2 == 0 { (1.0, "pos") } else { (-1.0, "neg") };
        text.push_str(&format!("{}, {}, {}\n", v + 0.01 * i as f64, -v, label));
    }
    std::fs::write(&path, text).unwrap();

    let out = run(&[
        "cv", "--data", path.to_str().unwrap(), "--model", "knn",
        "--neighbors", "1", "--folds", "3", "--positive", "neg",
    ]);
    let table = stdout_of(&out);
    assert!(table.contains("tiny.dat"), "{table}");
    assert!(table.contains("mean F1     1.0000"), "{table}");
}

#[test]
fn sweep_covers_the_grid_and_normalizes_at_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let records = dir.path().join("sweep.jsonl");
    let out = run(&[
        "sweep", "--data", &data, "--model", "vsc",
        "--k-list", "5,10", "--lambda-list", "0.5,2",
        "--ref-k", "10", "--ref-lambda", "2",
        "--folds", "5", "--seed", "7",
        "--out", records.to_str().unwrap(),
    ]);
    let table = stdout_of(&out);
    assert!(table.contains("normalized by vsc(k=10,lambda=2)"), "{table}");

    let text = std::fs::read_to_string(&records).unwrap();
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    let points: Vec<(u64, f64)> = lines
        .iter()
        .map(|v| {
            assert_eq!(v["kind"], "sweep");
            (
                v["sweep"]["k"].as_u64().unwrap(),
                v["sweep"]["lambda"].as_f64().unwrap(),
            )
        })
        .collect();
    assert_eq!(points, vec![(5, 0.5), (5, 2.0), (10, 0.5), (10, 2.0)]);
    let reference = &lines[3];
    assert_eq!(reference["sweep"]["normalized_mean_f1"], 1.0);
}

#[test]
fn sweep_rejects_reference_off_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&[
        "sweep", "--data", &data, "--model", "vsc",
        "--k-list", "5,10", "--lambda-list", "0.5,2",
        "--ref-k", "99", "--ref-lambda", "2", "--folds", "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reference"));
}

#[test]
fn sweep_can_normalize_against_saved_records() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let baseline = dir.path().join("baseline.jsonl");
    stdout_of(&run(&[
        "cv", "--data", &data, "--model", "knn", "--neighbors", "3",
        "--folds", "5", "--seed", "7", "--out", baseline.to_str().unwrap(),
    ]));

    let out = run(&[
        "sweep", "--data", &data, "--model", "vsc",
        "--k-list", "5,10", "--lambda-list", "1",
        "--ref-k", "5", "--ref-lambda", "1",
        "--folds", "5", "--seed", "7",
        "--normalize-against", baseline.to_str().unwrap(),
        "--format", "json-lines",
    ]);
    let text = stdout_of(&out);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let normalized = v["sweep"]["normalized_mean_f1"].as_f64().unwrap();
        let mean = v["mean_f1"].as_f64().unwrap();
        assert!(normalized > 0.0);
        // The knn baseline differs from the sweep's own reference point,
        // so normalized values are mean / baseline, not mean / reference.
        let reference: String =
            serde_json::from_value(v["sweep"]["reference"].clone()).unwrap();
        assert!(reference.contains("baseline.jsonl"), "{reference}");
        assert!(
            (normalized * baseline_mean(&baseline) - mean).abs() < 1e-12,
            "normalized {normalized} mean {mean}"
        );
    }
}

fn baseline_mean(path: &Path) -> f64 {
    let text = std::fs::read_to_string(path).unwrap();
    let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    v["mean_f1"].as_f64().unwrap()
}

#[test]
fn compare_renders_marks_ranks_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let good = dir.path().join("good.jsonl");
    let bad = dir.path().join("bad.jsonl");
    stdout_of(&run(&[
        "cv", "--data", &data, "--model", "vsc", "--k", "15", "--folds", "5",
        "--seed", "7", "--out", good.to_str().unwrap(),
    ]));
    // Using every training point as a neighbor degenerates knn into a
    // majority vote, giving a clearly weaker second entry.
    stdout_of(&run(&[
        "cv", "--data", &data, "--model", "knn", "--neighbors", "96",
        "--folds", "5", "--seed", "7", "--out", bad.to_str().unwrap(),
    ]));

    let table = stdout_of(&run(&[
        "compare",
        good.to_str().unwrap(),
        bad.to_str().unwrap(),
    ]));
    assert!(table.contains("reference: vsc"), "{table}");
    assert!(table.contains("rank"), "{table}");

    let json_out = stdout_of(&run(&[
        "compare",
        good.to_str().unwrap(),
        bad.to_str().unwrap(),
        "--format",
        "json-lines",
    ]));
    let v: serde_json::Value = serde_json::from_str(json_out.trim()).unwrap();
    assert_eq!(v["kind"], "compare");
    assert_eq!(v["reference"], "vsc");
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["rank"], 1);
    assert_eq!(entries[1]["rank"], 2);
    assert!(entries[0]["vs_reference"].is_null(), "reference row has no test");
    assert!(entries[1]["vs_reference"]["p_value"].is_number());
}

#[test]
fn compare_rejects_unknown_reference() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    stdout_of(&run(&[
        "cv", "--data", &data, "--model", "vsc", "--k", "15", "--folds", "5",
        "--seed", "7", "--out", a.to_str().unwrap(),
    ]));
    stdout_of(&run(&[
        "cv", "--data", &data, "--model", "knn", "--folds", "5", "--seed", "7",
        "--out", b.to_str().unwrap(),
    ]));
    let out = run(&[
        "compare",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--reference",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not found"));
}

#[test]
fn compare_needs_at_least_two_records() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let a = dir.path().join("a.jsonl");
    stdout_of(&run(&[
        "cv", "--data", &data, "--model", "vsc", "--k", "15", "--folds", "5",
        "--seed", "7", "--out", a.to_str().unwrap(),
    ]));
    let out = run(&["compare", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least two"));
}

#[test]
fn heatmap_writes_full_grid_with_exact_midline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heat.csv");
    stdout_of(&run(&[
        "heatmap",
        "--resolution",
        "41",
        "--out",
        path.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,confidence");
    assert_eq!(text.lines().count(), 1 + 41 * 41);
    // The default pair straddles the origin, so the center of the grid
    // sits on the separating plane where confidence is exactly one half.
    assert!(
        text.lines().any(|l| l == "0,0,0.5"),
        "missing exact midpoint line"
    );
}

#[test]
fn heatmap_rejects_malformed_pair_and_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heat.csv");
    let out = run(&[
        "heatmap", "--pair", "1,2:3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("point"));

    let out = run(&[
        "heatmap", "--x-range", "10:-10", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
