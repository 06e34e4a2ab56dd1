use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::*;

fn entry_path(dir: &std::path::Path, key: &str) -> PathBuf {
    dir.join(format!("{}.json", hex::encode(Sha256::digest(format!("{CACHE_SCHEMA}/{key}").as_bytes()))))
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(Some(dir.path().to_path_buf()));
    assert_eq!(cache.get("a"), None);
    cache.put("a", b"payload");
    assert_eq!(cache.get("a").as_deref(), Some(&b"payload"[..]));
    cache.put_json("b", &vec![1u64, 2, 3]);
    assert_eq!(cache.get_json::<Vec<u64>>("b"), Some(vec![1, 2, 3]));
    let s = cache.stats();
    assert_eq!((s.hits, s.misses, s.writes, s.discarded), (2, 1, 2, 0));

    let off = Cache::disabled();
    off.put("a", b"x");
    assert_eq!(off.get("a"), None);
}

#[test]
fn corrupt_entries_are_discarded() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(Some(dir.path().to_path_buf()));
    cache.put("k", b"good");
    let path = entry_path(dir.path(), "k");
    let mut raw: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    raw["payload"] = Value::String(hex::encode(b"evil"));
    std::fs::write(&path, serde_json::to_vec(&raw).unwrap()).unwrap();
    assert_eq!(cache.get("k"), None);
    assert!(!path.exists());
    assert_eq!(cache.stats().discarded, 1);

    std::fs::write(&path, b"{ not json").unwrap();
    assert_eq!(cache.get("k"), None);
    assert_eq!(cache.stats().discarded, 2);
}

#[test]
fn stale_schema_is_a_miss() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(Some(dir.path().to_path_buf()));
    cache.put("k", b"v");
    let path = entry_path(dir.path(), "k");
    let mut raw: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    raw["schema"] = Value::String("wittkit-cache/v0".into());
    std::fs::write(&path, serde_json::to_vec(&raw).unwrap()).unwrap();
    assert_eq!(cache.get("k"), None);
    cache.put("k", b"v");
    assert_eq!(cache.get("k").as_deref(), Some(&b"v"[..]));
}

#[test]
fn concurrent_writers_leave_a_valid_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Arc::new(Cache::new(Some(dir.path().to_path_buf())));
    let handles: Vec<_> = (0..8u8)
        .map(|i| {
            let cache = cache.clone();
            std::thread::spawn(move || {
                for _ in 0..20 {
                    cache.put("shared", &[i; 64]);
                    if let Some(v) = cache.get("shared") {
                        assert!(v.len() == 64 && v.iter().all(|&b| b == v[0]));
                    }
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
    let v = cache.get("shared").unwrap();
    assert!(v.iter().all(|&b| b == v[0]));
    assert_eq!(cache.stats().discarded, 0);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn invalid_configurations() {
    for (p, n) in [(2, 1), (9, 1), (1, 1), (3, 0)] {
        let cfg = RunConfig { p, n, ..RunConfig::default() };
        assert!(matches!(run_suite(&cfg), Err(HarnessError::ConfigInvalid(_))), "p = {p}, n = {n}");
    }
    let cfg = RunConfig { max_weight: 0, ..RunConfig::default() };
    assert!(matches!(cfg.validate(), Err(HarnessError::ConfigInvalid(_))));
    assert!("nope".parse::<Suite>().is_err());
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
}

#[test]
fn reports_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let base = RunConfig { suite: Suite::SvIdentity, cache_dir: Some(dir.path().to_path_buf()), ..RunConfig::default() };
    let cold = run_suite(&base).unwrap();
    assert!(cold.passed, "{}", cold.summary_table());
    assert_eq!(cold.runtime.cache.hits, 0);
    let warm = run_suite(&RunConfig { jobs: 4, ..base.clone() }).unwrap();
    assert_eq!(warm.runtime.cache.hits as usize, warm.checks.len());
    let uncached = run_suite(&RunConfig { cache_dir: None, jobs: 2, ..base }).unwrap();
    assert_eq!(cold.deterministic_json(), warm.deterministic_json());
    assert_eq!(cold.deterministic_json(), uncached.deterministic_json());
    // Every number is written as a string.
    let v: Value = serde_json::from_str(&cold.to_canonical_json()).unwrap();
    fn no_numbers(v: &Value) -> bool {
        match v {
            Value::Number(_) => false,
            Value::Array(a) => a.iter().all(no_numbers),
            Value::Object(o) => o.values().all(no_numbers),
            _ => true,
        }
    }
    assert!(no_numbers(&v));
}

#[test]
fn report_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/report.json");
    let cfg = RunConfig { suite: Suite::DeltaExponent, n: 1, out: Some(out.clone()), ..RunConfig::default() };
    let r = run_suite(&cfg).unwrap();
    assert!(r.passed);
    assert_eq!(std::fs::read_to_string(out).unwrap(), r.to_canonical_json());
}
