//! Content-addressed cache of finished CSV tables keyed by the FNV-1a hash
//! of the computational configuration; each entry carries a sidecar JSON of
//! the configuration that produced it.

use crate::config::RunConfig;
use crate::output::{write_atomic, Json};
use std::path::PathBuf;

pub fn key_of(config: &RunConfig) -> String {
    format!("{:016x}", fnv1a(config.canonical().as_bytes()))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(config: &RunConfig) -> Option<Cache> {
        let dir = config.cache_dir()?;
        Some(Cache { dir: PathBuf::from(dir) })
    }

    /// Returns the cached table if the entry is intact; a corrupt entry is
    /// treated as a miss (the caller recomputes and overwrites) with a
    /// warning on stderr.
    pub fn lookup(&self, key: &str) -> Option<String> {
        let path = self.dir.join(format!("{key}.csv"));
        match std::fs::read_to_string(&path) {
            Ok(body) => {
                if body.ends_with('\n') && body.lines().count() >= 1 {
                    Some(body)
                } else {
                    eprintln!("warning: corrupt cache entry {}, recomputing", path.display());
                    None
                }
            }
            Err(_) => None,
        }
    }

    pub fn store(&self, key: &str, config: &RunConfig, table: &str) {
        let csv_path = self.dir.join(format!("{key}.csv"));
        let side_path = self.dir.join(format!("{key}.json"));
        let sidecar = Json::Obj(vec![
            ("command".into(), Json::Str(config.command.clone())),
            ("canonical".into(), Json::Str(config.canonical())),
        ])
        .render();
        if let Err(e) = write_atomic(&csv_path, table.as_bytes()) {
            eprintln!("warning: cache store failed: {e}");
            return;
        }
        let _ = write_atomic(&side_path, sidecar.as_bytes());
    }
}
