use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ga-harmonic-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ga-harmonic"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("GA_HARMONIC_THREADS", t),
        None => cmd.env_remove("GA_HARMONIC_THREADS"),
    };
    cmd.output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn passing_suite_exits_zero_and_writes_reports() {
    let dir = scratch("pass");
    let out = dir.join("reports");
    let out_s = out.to_string_lossy();
    let o = run(&["plancherel", "--out", &out_s, "--format", "csv"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let text = std::fs::read_to_string(out.join("plancherel.csv")).unwrap();
    assert!(text.starts_with("identity,level,n,"));
    assert!(text.lines().count() > 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = scratch("threads");
    let cfg = write_config(&dir, "levels = [\"S\", \"GA+\"]\n");
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.join(format!("t{threads}"));
        let o = run(&["all", "--config", &cfg, "--out", &out.to_string_lossy(), "--no-timings"], Some(threads));
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        files.push(std::fs::read(out.join("all.jsonl")).unwrap());
    }
    assert!(!files[0].is_empty());
    assert_eq!(files[0], files[1]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_config_exits_two_and_lists_violations() {
    let dir = scratch("invalid");
    let cfg = write_config(&dir, "n = 5\n[grid.a]\ncount = 3\nlo = -1.0\nhi = 1.0\n");
    let o = run(&["plancherel", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("n") && err.contains("grid.a"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_profile_is_an_error() {
    let o = run(&["plancherel", "--profile", "nope"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_table() {
    let dir = scratch("sweep");
    let out = dir.join("s");
    let o = run(
        &["sweep", "--target", "plancherel:N", "--axes", "n", "--steps", "2", "--out", &out.to_string_lossy()],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let text = std::fs::read_to_string(out.join("sweep.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
