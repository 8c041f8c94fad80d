use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn dke(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dke")).current_dir(cwd).args(args).output().expect("dke runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

/// Four points on a 4-cycle with uniform mass; the distance kernel has eigenvalues 1, -1/2, -1/2, 0.
fn write_cycle(dir: &Path) -> String {
    let path = dir.join("c4.json");
    let json = r#"{"n":4,"dist":[[0,1,2,1],[1,0,1,2],[2,1,0,1],[1,2,1,0]],"measure":[0.25,0.25,0.25,0.25]}"#;
    fs::write(&path, json).unwrap();
    format!("file:{}", path.display())
}

#[test]
fn sample_writes_space_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dke(tmp.path(), &["--n", "30", "--out", "o", "sample", "lens:7:1@1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let root = tmp.path().join("o");
    let csv = fs::read_to_string(root.join("space.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 31, "30 distance rows and a measure row");
    let m = manifest(&root);
    assert_eq!(m["command"], "sample");
    assert_eq!(m["settings"]["settings"]["spaces"][0]["seed"], 1);
    let files = m["files"].as_array().unwrap();
    assert_eq!(files.len(), 2);
    for f in files {
        let bytes = fs::read(root.join(f["path"].as_str().unwrap())).unwrap();
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(f["sha256"], hex.as_str());
        assert_eq!(f["bytes"], bytes.len());
    }
}

#[test]
fn spectrum_columns_per_space() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dke(tmp.path(), &["--n", "40", "spectrum", "sphere:2@1", "torus@2", "--count", "6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("dke-out/spectrum.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "index,sphere:2@1,torus@2");
    assert_eq!(lines.len(), 7);
    // Eigenvalues of a probability measure lie below the diameter: pi on S^2, 2(R + r) = 7 on the torus.
    for l in &lines[1..] {
        for (v, diam) in l.split(',').skip(1).zip([std::f64::consts::PI, 7.0]) {
            assert!(v.parse::<f64>().unwrap().abs() <= diam, "{l}");
        }
    }
    assert!(tmp.path().join("dke-out/spectrum.svg").exists());
}

#[test]
fn identical_spaces_have_zero_hausdorff_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dke(tmp.path(), &["--n", "40", "--k", "1-4", "hausdorff", "lens:7:4@5", "lens:7:4@5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("dke-out/hausdorff.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!(r.ends_with(",0"), "{r}");
    }
}

#[test]
fn reruns_are_bit_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--n", "40", "--k", "3", "--seed", "9", "embed", "torus", "--bins", "8", "--eigenfunctions", "1,2"];
    for d in [&a, &b] {
        let o = dke(d.path(), &args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let m = manifest(&a.path().join("dke-out"));
    assert_eq!(m, manifest(&b.path().join("dke-out")));
    for f in m["files"].as_array().unwrap() {
        let p = f["path"].as_str().unwrap();
        assert_eq!(
            fs::read(a.path().join("dke-out").join(p)).unwrap(),
            fs::read(b.path().join("dke-out").join(p)).unwrap()
        );
    }
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.json"), "{\"spaces\": [],\n \"hausdorf\": {\"ks\": [1]}}").unwrap();
    let o = dke(tmp.path(), &["run", "--config", "bad.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("hausdorf") && stderr(&o).contains("line 2"), "{}", stderr(&o));

    fs::write(tmp.path().join("dangling.json"), r#"{"spaces": [], "compare": {"pairs": [["x", "y"]], "k": 2}}"#)
        .unwrap();
    let o = dke(tmp.path(), &["run", "--config", "dangling.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("compare.pairs[0]"), "{}", stderr(&o));

    for args in [
        &["sample", "cube:3"][..],
        &["--k", "0", "embed", "torus"],
        &["transform", "torus"],
        &["--metric", "taxicab", "sample", "torus"],
    ] {
        assert_eq!(code(&dke(tmp.path(), args)), 2, "{args:?}");
    }
}

#[test]
fn hypothesis_violation_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_cycle(tmp.path());
    let o = dke(tmp.path(), &["--k", "4", "bounds", &space, "--ab", "1,0,1"]);
    assert_eq!(code(&o), 3);
    assert!(
        stderr(&o).contains("hypothesis violated") && stderr(&o).contains("eigenvalue 4 is zero"),
        "{}",
        stderr(&o)
    );
    let o = dke(tmp.path(), &["--k", "1-3", "bounds", &space, "--ab", "1,0,1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn config_run_covers_every_section() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{
      "out": "runout",
      "spaces": [
        {"name": "a", "kind": "lens", "n": 40, "p": 7, "q": 1, "seed": 1},
        {"name": "b", "kind": "lens", "n": 40, "p": 7, "q": 1, "seed": 2},
        {"name": "s", "kind": "sphere", "dim": 2, "n": 40, "metric": "chordal", "seed": 3}
      ],
      "sample": {"spaces": ["s"]},
      "spectrum": {"count": 5},
      "embed": {"k": 3, "bins": 5, "eigenfunctions": [1], "spaces": ["a"]},
      "hausdorff": {"ks": [1, 2]},
      "bounds": {"ks": [2, 5], "spaces": ["s"]},
      "transform": {"k": 2, "rips_scale": 0.6, "dirs": 3, "direction_seed": 1, "spaces": ["s"]},
      "compare": {"pairs": [["a", "b"]], "k": 3}
    }"#;
    fs::write(tmp.path().join("cfg.json"), cfg).unwrap();
    let o = dke(tmp.path(), &["run", "--config", "cfg.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let root = tmp.path().join("runout");
    for f in [
        "sample/s/space.json",
        "spectrum/spectrum.csv",
        "embed/a/summary.json",
        "embed/a/eigenfunction_1_histogram.csv",
        "hausdorff/hausdorff.csv",
        "bounds/s/bounds.json",
        "transform/s/transform_ipkt.json",
        "transform/s/transform_summary.csv",
        "compare/a__b/compare.json",
    ] {
        assert!(root.join(f).exists(), "{f}");
    }
    let report: Value =
        serde_json::from_str(&fs::read_to_string(root.join("compare/a__b/compare.json")).unwrap()).unwrap();
    assert!(report["sample_bottleneck"].as_f64().unwrap() > 0.0);
    assert!(report["stability_bound"]["value"].as_f64().unwrap() >= report["hausdorff"].as_f64().unwrap());
    assert_eq!(manifest(&root)["settings"]["config"]["spaces"][2]["metric"], "chordal");
}
