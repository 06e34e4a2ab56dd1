use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Version prefix of every key; bumping it orphans all older entries.
pub const CACHE_SCHEMA: &str = "wittkit-cache/v1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub writes: u64,
    /// Entries that failed their checksum or did not parse.
    pub discarded: u64,
    pub io_failures: u64,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema: String,
    key: String,
    sha256: String,
    payload: String,
}

/// File-per-key store. Writes go to a temporary file in the same directory
/// and are renamed into place, so readers see either nothing or a complete
/// entry. A disabled cache (no directory) misses on every read.
#[derive(Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    stats: Mutex<CacheStats>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir, stats: Mutex::new(CacheStats::default()) }
    }

    pub fn disabled() -> Self {
        Self::new(None)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn stats(&self) -> CacheStats {
        *self.stats.lock().expect("stats lock")
    }

    fn bump(&self, f: impl FnOnce(&mut CacheStats)) {
        f(&mut self.stats.lock().expect("stats lock"));
    }

    fn full_key(key: &str) -> String {
        format!("{CACHE_SCHEMA}/{key}")
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", digest(Self::full_key(key).as_bytes()))))
    }

    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        let path = self.path(key)?;
        let raw = match fs::read(&path) {
            Ok(raw) => raw,
            Err(_) => {
                self.bump(|s| s.misses += 1);
                return None;
            }
        };
        let full = Self::full_key(key);
        let decoded = serde_json::from_slice::<Envelope>(&raw).ok().and_then(|env| {
            if env.schema != CACHE_SCHEMA || env.key != full {
                return None;
            }
            let payload = hex::decode(&env.payload).ok()?;
            (digest(&payload) == env.sha256).then_some(payload)
        });
        match decoded {
            Some(payload) => {
                self.bump(|s| s.hits += 1);
                Some(payload)
            }
            None => {
                let _ = fs::remove_file(&path);
                self.bump(|s| {
                    s.discarded += 1;
                    s.misses += 1;
                });
                None
            }
        }
    }

    /// Stores a payload; failures are counted and otherwise ignored.
    pub fn put(&self, key: &str, payload: &[u8]) {
        let Some(path) = self.path(key) else { return };
        let env = Envelope {
            schema: CACHE_SCHEMA.into(),
            key: Self::full_key(key),
            sha256: digest(payload),
            payload: hex::encode(payload),
        };
        let res = (|| -> std::io::Result<()> {
            let dir = path.parent().expect("cache entries live in a directory");
            fs::create_dir_all(dir)?;
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(&serde_json::to_vec(&env).expect("plain data serializes"))?;
            tmp.as_file().sync_all()?;
            tmp.persist(&path).map_err(|e| e.error)?;
            Ok(())
        })();
        match res {
            Ok(()) => self.bump(|s| s.writes += 1),
            Err(_) => self.bump(|s| s.io_failures += 1),
        }
    }

    pub fn get_json<T: for<'de> Deserialize<'de>>(&self, key: &str) -> Option<T> {
        let bytes = self.get(key)?;
        match serde_json::from_slice(&bytes) {
            Ok(v) => Some(v),
            Err(_) => {
                self.bump(|s| s.discarded += 1);
                None
            }
        }
    }

    pub fn put_json<T: Serialize>(&self, key: &str, value: &T) {
        self.put(key, &serde_json::to_vec(value).expect("plain data serializes"));
    }
}
