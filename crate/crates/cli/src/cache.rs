//! Report cache keyed by a content hash; entries from other versions are ignored.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nchull::report::VERSION;
use sha2::{Digest, Sha256};

pub struct Key<'a> {
    pub scenario: &'a str,
    pub conventions: &'a str,
    pub command: &'a str,
    pub degree_cap: Option<usize>,
    pub cochains: &'a str,
}

impl Key<'_> {
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        let cap = self.degree_cap.map(|c| c.to_string()).unwrap_or_default();
        for part in [VERSION, self.command, &cap, self.scenario, self.conventions, self.cochains] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.json", self.digest()))
    }
}

/// The cached report, or `None` on a miss, a version mismatch or a corrupt entry.
pub fn load(dir: &Path, key: &Key) -> Option<String> {
    let path = key.path(dir);
    let text = fs::read_to_string(&path).ok()?;
    let entry: Option<(String, String)> = serde_json::from_str::<serde_json::Value>(&text).ok().and_then(|v| {
        let version = v.get("version")?.as_str()?.to_string();
        let report = v.get("report")?.as_str()?.to_string();
        serde_json::from_str::<serde_json::Value>(&report).ok()?;
        Some((version, report))
    });
    match entry {
        Some((version, report)) if version == VERSION => Some(report),
        Some(_) => None,
        None => {
            eprintln!("warning: discarding corrupt cache entry {}", path.display());
            let _ = fs::remove_file(&path);
            None
        }
    }
}

/// Write-then-rename so concurrent readers never see a partial entry.
pub fn store(dir: &Path, key: &Key, report: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let path = key.path(dir);
    let tmp = dir.join(format!(".{}.{}.tmp", key.digest(), std::process::id()));
    let entry = serde_json::json!({ "version": VERSION, "report": report });
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(entry.to_string().as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path)
}
