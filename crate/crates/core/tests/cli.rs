use std::path::Path;
use std::process::{Command, Output};

use leosel::harness::{load_records, MANIFEST_FILE, RECORDS_FILE, SUMMARY_FILE};
use leosel::scenario::parse_edges;

fn leosel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leosel"))
        .args(args)
        .env_remove("LEOSEL_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let edges = dir.join("edges.json");
    std::fs::write(
        &edges,
        r#"[{"name": "a", "lat_deg": 40.7, "lon_deg": -74.0, "population": 8000000},
            {"name": "b", "lat_deg": 41.9, "lon_deg": -87.6, "data_volume_mb": 3.5}]"#,
    )
    .unwrap();
    let path = dir.join("config.json");
    let text = format!(
        r#"{{"constellation": "starlink_shell1", "edges_file": "edges.json", "traffic": {{"seed": 42}},
            "sample_count": 3, "output_dir": "out"{extra}}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn gen_scenario_emits_loadable_sites() {
    let out = leosel(&["gen-scenario", "--preset", "north-america-20"]);
    assert!(out.status.success());
    let edges = parse_edges(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(edges.len(), 20);
}

#[test]
fn run_writes_outputs_and_replays_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "");
    let out = leosel(&["run", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = dir.path().join("out");
    for file in [RECORDS_FILE, SUMMARY_FILE, MANIFEST_FILE] {
        assert!(first.join(file).is_file(), "{file}");
    }

    let replay = dir.path().join("replay");
    let manifest = first.join(MANIFEST_FILE);
    let out = leosel(&["run", manifest.to_str().unwrap(), "--output-dir", replay.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let a = load_records(&first.join(RECORDS_FILE)).unwrap();
    let b = load_records(&replay.join(RECORDS_FILE)).unwrap();
    assert_eq!(a.len(), 12);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.t_s, x.algorithm, x.makespan_s, x.throughput_mbps), (y.t_s, y.algorithm, y.makespan_s, y.throughput_mbps));
        assert_eq!((x.optimal, x.m, x.n), (y.optimal, y.m, y.n));
    }

    let out = leosel(&["summarize", first.join(RECORDS_FILE).to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["instants"], 3);
}

#[test]
fn output_dir_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#", "algorithms": ["DVA"]"#);
    let target = dir.path().join("from_env");
    let out = Command::new(env!("CARGO_BIN_EXE_leosel"))
        .args(["run", config.to_str().unwrap()])
        .env("LEOSEL_OUTPUT_DIR", &target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join(RECORDS_FILE).is_file());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#", "bogus_field": 1"#);
    assert_eq!(leosel(&["run", config.to_str().unwrap()]).status.code(), Some(1));

    let config = write_config(dir.path(), r#", "sample_interval_s": -5"#);
    assert_eq!(leosel(&["run", config.to_str().unwrap()]).status.code(), Some(1));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(leosel(&["run", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn runtime_aborts_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(leosel(&["run", missing.to_str().unwrap()]).status.code(), Some(2));

    // a polar site never sees Shell-1, so every instant is skipped
    std::fs::write(dir.path().join("edges.json"), r#"[{"name": "pole", "lat_deg": 89.5, "lon_deg": 0, "data_volume_mb": 1}]"#).unwrap();
    std::fs::write(
        dir.path().join("polar.json"),
        r#"{"constellation": "starlink_shell1", "edges_file": "edges.json", "sample_count": 2, "output_dir": "out"}"#,
    )
    .unwrap();
    let out = leosel(&["run", dir.path().join("polar.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_exact_solver_on_exported_instance() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "");
    let instance = dir.path().join("instance.json");
    let out = leosel(&["export-instance", config.to_str().unwrap(), "--t-s", "600", "-o", instance.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = leosel(&["oracle", instance.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let optimum = report["optimum"]["makespan_s"].as_f64().unwrap();
    let algorithms = report["algorithms"].as_array().unwrap();
    assert_eq!(algorithms.len(), 4);
    for a in algorithms {
        let t = a["makespan_s"].as_f64().unwrap();
        assert!(t >= optimum * (1.0 - 1e-12));
        if a["algorithm"] == "OP" {
            assert_eq!(t, optimum);
        }
    }
}
