use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-track"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stats(dir: &Path) -> Vec<(String, String)> {
    fs::read_to_string(dir.join("stats.txt"))
        .unwrap()
        .lines()
        .filter_map(|l| l.split_once(": ").map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

fn stat(dir: &Path, key: &str) -> f64 {
    stats(dir)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("missing stat {key}"))
        .1
        .parse()
        .unwrap()
}

fn track_ids(dir: &Path) -> Vec<usize> {
    let text = fs::read_to_string(dir.join("tracks.csv")).unwrap();
    let mut ids: Vec<usize> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    ids.dedup();
    ids
}

#[test]
fn small_preset_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = run(&[
        "--synth",
        "rotating-gaussians-small",
        "--delta",
        "0.1",
        "--emit-original-jacobi",
        "--robustness-report",
        "--dump-intermediate",
        "--export-field",
        "stacked-raw",
        "--out",
        out,
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for f in [
        "tracks.csv",
        "tracks.vtk",
        "stats.txt",
        "jacobi.csv",
        "jacobi.vtk",
        "robustness.csv",
        "robustness_summary.txt",
        "nodes.csv",
        "edges.csv",
        "critical_points.csv",
        "ground_truth.csv",
        "field",
        "field.meta",
        "steps/magnitude_0.raw",
        "steps/labels_7.raw",
    ] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let p = dir.path();
    assert!(stat(p, "tracks_after_postprocess") <= stat(p, "tracks_before_postprocess"));
    assert!(stat(p, "tracks_before_postprocess") <= stat(p, "graph_nodes"));
    assert!(stat(p, "simplified_edges") <= stat(p, "original_jacobi_edges"));
    let vtk = fs::read_to_string(p.join("tracks.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version 3.0"));
}

#[test]
fn exported_field_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let common = ["--delta", "0.1", "--persistence", "0"];
    let mut args = vec![
        "--synth",
        "rotating-gaussians-small",
        "--export-field",
        "raw-f32",
        "--out",
        a.to_str().unwrap(),
    ];
    args.extend(common);
    assert!(run(&args).status.success());
    let input = a.join("field");
    let mut args = vec![
        "--input",
        input.to_str().unwrap(),
        "--format",
        "raw-f32",
        "--out",
        b.to_str().unwrap(),
    ];
    args.extend(common);
    let res = run(&args);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    // f32 storage is exact enough to reproduce the same tracks
    assert_eq!(
        fs::read_to_string(a.join("tracks.csv")).unwrap(),
        fs::read_to_string(b.join("tracks.csv")).unwrap()
    );
}

#[test]
fn default_preset_gives_three_tracks() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(&["--synth", "rotating-gaussians", "--out", dir.path().to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(track_ids(dir.path()), vec![0, 1, 2]);
    assert!(stat(dir.path(), "suggested_delta") > 0.0);
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let res = run(&[
            "--synth",
            "rotating-gaussians-noisy",
            "--size",
            "32x32x20",
            "--delta",
            "0.2",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
        outputs.push(fs::read_to_string(out.join("tracks.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(
        code(&["--synth", "rotating-gaussians-small", "--delta", "-1", "--out", out]),
        Some(1)
    );
    assert_eq!(
        code(&["--synth", "rotating-gaussians-small", "--threads", "0", "--out", out]),
        Some(1)
    );
    assert_eq!(code(&["--synth", "nope", "--out", out]), Some(1));
    assert_eq!(code(&["--out", out]), Some(1));
    let missing = dir.path().join("missing");
    assert_eq!(code(&["--input", missing.to_str().unwrap(), "--out", out]), Some(2));
    // truncated data file
    let field = dir.path().join("f");
    fs::write(dir.path().join("f.meta"), "width: 4\nheight: 4\ntimesteps: 2\n").unwrap();
    fs::write(&field, [0u8; 12]).unwrap();
    assert_eq!(
        code(&[
            "--input",
            field.to_str().unwrap(),
            "--format",
            "stacked-raw",
            "--out",
            out
        ]),
        Some(2)
    );
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn scaling_probe_reports_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(&[
        "--synth",
        "rotating-gaussians-small",
        "--scaling-probe",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let table = String::from_utf8(res.stdout).unwrap();
    for case in ["base", "repeat", "2T", "2n"] {
        assert!(table.lines().any(|l| l.starts_with(case)), "{table}");
    }
    assert!(dir.path().join("scaling.txt").exists());
}
