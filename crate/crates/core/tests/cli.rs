use std::path::Path;
use std::process::Command;

fn bakerlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bakerlab")).args(args).output().unwrap()
}

#[test]
fn unknown_key_is_a_config_error() {
    let out = bakerlab(&["classify", "--set", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn unknown_map_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bakerlab(&["classify", "--set", "map=nope", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn circle_stats_is_reproducible_across_runs_and_threads() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/circle_stats_blaschke.cfg");
    let mut csvs = Vec::new();
    for threads in ["1", "1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let out = bakerlab(&[
            "--threads",
            threads,
            "circle-stats",
            "-c",
            cfg.to_str().unwrap(),
            "--set",
            "samples=2000",
            "-o",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join("manifest.json").exists());
        csvs.push(std::fs::read(dir.path().join("circle_stats.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(csvs[0], csvs[2]);
}
