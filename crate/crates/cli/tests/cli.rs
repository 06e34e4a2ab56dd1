use std::process::Command;

fn wittkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wittkit"))
}

#[test]
fn passing_suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = wittkit()
        .args(["--suite", "sv-identity", "--out"])
        .arg(&out)
        .env_remove("WITTKIT_CACHE")
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let table = String::from_utf8(status.stdout).unwrap();
    assert!(table.contains("PASS"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["schema"], "wittkit-report/v1");
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["p"], "3");
}

#[test]
fn cache_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    for _ in 0..2 {
        let out = wittkit().args(["--suite", "delta-exponent", "--n", "1"]).env("WITTKIT_CACHE", &cache).output().unwrap();
        assert!(out.status.success());
    }
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
}

#[test]
fn bad_prime_is_rejected() {
    let out = wittkit().args(["--p", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd prime"));
    let out = wittkit().args(["--suite", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
