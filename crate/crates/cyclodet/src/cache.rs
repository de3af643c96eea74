//! Result cache: one JSON-lines file per prime. Each line holds a key
//! (prime, Δ mode, backend, code version) and the serialized report, so a
//! hit replays exactly the bytes a cold run produced.

use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::report::ReportJson;

/// Hash of the library sources, computed at build time.
pub const CODE_VERSION: &str = env!("CYCLODET_SOURCE_HASH");

pub const CACHE_ENV: &str = "CYCLODET_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub p: u32,
    pub delta_mode: String,
    pub backend: String,
    pub bareiss_max_p: u32,
    pub version: String,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: CacheKey,
    report: ReportJson,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, p: u32) -> PathBuf {
        self.dir.join(format!("p{p:06}.jsonl"))
    }

    /// The most recent report stored under `key`. Unreadable lines are
    /// ignored.
    pub fn get(&self, key: &CacheKey) -> io::Result<Option<ReportJson>> {
        let file = match fs::File::open(self.path_for(key.p)) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut found = None;
        for line in BufReader::new(file).lines() {
            let line = line?;
            if let Ok(entry) = serde_json::from_str::<CacheLine>(&line) {
                if entry.key == *key {
                    found = Some(entry.report);
                }
            }
        }
        Ok(found)
    }

    pub fn put(&self, key: &CacheKey, report: &ReportJson) -> io::Result<()> {
        let line = serde_json::to_string(&CacheLine { key: key.clone(), report: report.clone() })?;
        let mut f = OpenOptions::new().create(true).append(true).open(self.path_for(key.p))?;
        f.write_all(format!("{line}\n").as_bytes())
    }
}
