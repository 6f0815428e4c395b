//! End-to-end checks of the gbct binary: subcommand plumbing, stdout
//! formats, determinism, and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gbct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbct")).args(args).output().expect("spawn gbct")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Last CSV column of every data row, i.e. the generator's labels.
fn truth_column(csv: &Path, out: &Path) {
    let text = fs::read_to_string(csv).unwrap();
    let labels: Vec<&str> =
        text.lines().skip(1).map(|line| line.rsplit(',').next().unwrap()).collect();
    fs::write(out, labels.join("\n") + "\n").unwrap();
}

#[test]
fn gen_fit_eval_roundtrip_on_moons() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("moons.csv");
    let pred = dir.path().join("pred.csv");
    let truth = dir.path().join("truth.csv");

    let out = gbct(&["gen", "--shape", "moons", "--n", "600", "--output", path_str(&data)]);
    assert!(out.status.success(), "{out:?}");

    let out = gbct(&[
        "fit",
        "--input",
        path_str(&data),
        "--label-col",
        "2",
        "--k",
        "2",
        "--output",
        path_str(&pred),
    ]);
    assert!(out.status.success(), "{out:?}");
    let line = stdout_of(&out);
    assert!(line.starts_with("n=600 "), "unexpected fit line: {line}");
    assert!(line.contains(" k=2 "), "unexpected fit line: {line}");

    truth_column(&data, &truth);
    let out = gbct(&["eval", path_str(&pred), path_str(&truth)]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout_of(&out);
    assert!(text.contains("ACC 1.000000"), "eval said: {text}");
    assert!(text.contains("NMI 1.000000"), "eval said: {text}");
}

#[test]
fn fit_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("blobs.csv");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");

    let out = gbct(&[
        "gen",
        "--shape",
        "blobs",
        "--n",
        "900",
        "--jitter",
        "0.5",
        "--output",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{out:?}");

    let run = |label_file: &Path| {
        let out = gbct(&[
            "fit",
            "--input",
            path_str(&data),
            "--label-col",
            "2",
            "--k",
            "3",
            "--output",
            path_str(label_file),
        ]);
        assert!(out.status.success(), "{out:?}");
        stdout_of(&out)
    };
    let first = run(&a);
    let second = run(&b);
    // Wall times vary run to run; everything before them must not.
    let stable = |line: &str| line.split(" split_ms=").next().unwrap().to_owned();
    assert_eq!(stable(&first), stable(&second), "fit lines differ between runs");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "label files differ");
}

#[test]
fn adaptive_fit_reports_blob_count_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("blobs.csv");
    let pred = dir.path().join("pred.csv");
    let trace = dir.path().join("trace.csv");

    let out = gbct(&[
        "gen",
        "--shape",
        "blobs",
        "--n",
        "2000",
        "--jitter",
        "0.5",
        "--output",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{out:?}");

    let out = gbct(&[
        "fit",
        "--input",
        path_str(&data),
        "--label-col",
        "2",
        "--adaptive",
        "--trace-out",
        path_str(&trace),
        "--output",
        path_str(&pred),
    ]);
    assert!(out.status.success(), "{out:?}");
    let line = stdout_of(&out);
    assert!(line.contains(" k=3 "), "adaptive fit line: {line}");
    assert!(line.contains(" knee=round"), "adaptive fit line: {line}");

    let trace_text = fs::read_to_string(&trace).unwrap();
    assert!(
        trace_text.starts_with("round_index,merges_applied,min_merge_distance"),
        "trace header: {trace_text}"
    );
    assert!(trace_text.lines().count() >= 3, "trace too short: {trace_text}");
}

#[test]
fn plot_renders_one_marker_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tiny.csv");
    let svg = dir.path().join("tiny.svg");
    fs::write(&data, "1.0,2.0\n3.0,4.0\n5.0,6.0\n").unwrap();

    let out = gbct(&["plot", "--input", path_str(&data), "--output", path_str(&svg)]);
    assert!(out.status.success(), "{out:?}");
    let markup = fs::read_to_string(&svg).unwrap();
    assert_eq!(markup.matches("class=\"pt\"").count(), 3);
    assert!(markup.trim_end().ends_with("</svg>"));
}

#[test]
fn plot_with_dims_and_ball_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("moons.csv");
    let svg = dir.path().join("moons.svg");
    let out = gbct(&["gen", "--shape", "moons", "--n", "200", "--output", path_str(&data)]);
    assert!(out.status.success(), "{out:?}");

    let out = gbct(&[
        "plot",
        "--input",
        path_str(&data),
        "--label-col",
        "2",
        "--dims",
        "0,1",
        "--balls",
        "--output",
        path_str(&svg),
    ]);
    assert!(out.status.success(), "{out:?}");
    let markup = fs::read_to_string(&svg).unwrap();
    assert_eq!(markup.matches("class=\"pt\"").count(), 200);
    // Ball outlines are the circles that are not point markers.
    assert!(markup.matches("<circle").count() > 200, "no ball overlay drawn");
}

#[test]
fn plot_beyond_two_dims_needs_dims_flag() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d3.csv");
    let svg = dir.path().join("d3.svg");
    fs::write(&data, "1,2,3\n4,5,6\n7,8,9\n").unwrap();

    let out = gbct(&["plot", "--input", path_str(&data), "--output", path_str(&svg)]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");

    let out =
        gbct(&["plot", "--input", path_str(&data), "--dims", "0,2", "--output", path_str(&svg)]);
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn missing_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = gbct(&[
        "fit",
        "--input",
        path_str(&dir.path().join("nope.csv")),
        "--output",
        path_str(&dir.path().join("out.csv")),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn unparseable_cell_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    let pred = dir.path().join("pred.csv");
    fs::write(&data, "1.0,2.0\n3.0,zzz\n").unwrap();
    let out = gbct(&["fit", "--input", path_str(&data), "--output", path_str(&pred)]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn unreachable_k_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tiny.csv");
    let pred = dir.path().join("pred.csv");
    let out = gbct(&[
        "gen",
        "--shape",
        "blobs",
        "--n",
        "60",
        "--jitter",
        "0.5",
        "--output",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{out:?}");
    let out = gbct(&[
        "fit",
        "--input",
        path_str(&data),
        "--label-col",
        "2",
        "--k",
        "40",
        "--output",
        path_str(&pred),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn eval_length_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&a, "0\n1\n0\n").unwrap();
    fs::write(&b, "0\n1\n").unwrap();
    let out = gbct(&["eval", path_str(&a), path_str(&b)]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn k_and_adaptive_flags_conflict() {
    let out = gbct(&["fit", "--input", "x.csv", "--output", "y.csv", "--k", "2", "--adaptive"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("cannot be used with"), "stderr: {err}");
}

#[test]
fn bench_prints_the_size_ladder() {
    let out = gbct(&["bench"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,split_ms,merge_ms,total_ms"));
    let ns: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["1000", "2000", "4000", "8000"]);
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').count(), 5, "row: {line}");
    }
}

#[test]
fn gen_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = gbct(&[
            "gen",
            "--shape",
            "spiral",
            "--n",
            "300",
            "--seed",
            seed,
            "--output",
            path_str(path),
        ]);
        assert!(out.status.success(), "{out:?}");
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}
