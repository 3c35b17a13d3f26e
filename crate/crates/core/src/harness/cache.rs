//! On-disk cache of reference solutions.
//!
//! Layout: `<root>/<sha256 of the key text>/snapshot-<k>.dat` plus
//! `meta.txt` holding the key text. Entries are assembled in a private
//! directory and renamed into place, so readers never see a partial entry.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::snapshot::Snapshot;

/// Everything that determines a reference solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceKey {
    pub equation: String,
    pub coupling: String,
    pub initial: String,
    pub dim: usize,
    pub bounds: (f64, f64),
    pub points: usize,
    pub epsilon: f64,
    pub dt: f64,
    pub times: Vec<f64>,
}

impl ReferenceKey {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "equation {}", self.equation);
        let _ = writeln!(out, "coupling {}", self.coupling);
        let _ = writeln!(out, "initial {}", self.initial);
        let _ = writeln!(out, "dim {}", self.dim);
        let _ = writeln!(out, "bounds {:?} {:?}", self.bounds.0, self.bounds.1);
        let _ = writeln!(out, "J {}", self.points);
        let _ = writeln!(out, "epsilon {:?}", self.epsilon);
        let _ = writeln!(out, "dt {:?}", self.dt);
        let times: Vec<String> = self.times.iter().map(|t| format!("{t:?}")).collect();
        let _ = writeln!(out, "times {}", times.join(" "));
        out
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.text().as_bytes()))
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceCache {
    root: PathBuf,
}

static SCRATCH: AtomicUsize = AtomicUsize::new(0);

impl ReferenceCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ReferenceCache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entry_dir(&self, key: &ReferenceKey) -> PathBuf {
        self.root.join(key.digest())
    }

    /// The cached snapshots, if a complete entry for `key` exists.
    pub fn load(&self, key: &ReferenceKey) -> Result<Option<Vec<Snapshot>>> {
        let dir = self.entry_dir(key);
        let meta = match fs::read_to_string(dir.join("meta.txt")) {
            Ok(m) => m,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let (text, count) = meta
            .rsplit_once("snapshots ")
            .ok_or_else(|| Error::Format(format!("cache entry {} has no snapshot count", dir.display())))?;
        if text != key.text() {
            return Err(Error::Format(format!(
                "cache entry {} does not match its key (hash collision or tampering)",
                dir.display()
            )));
        }
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad snapshot count in {}", dir.display())))?;
        (0..count)
            .map(|k| Snapshot::read(dir.join(format!("snapshot-{k}.dat"))))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Write an entry. If another writer got there first its entry is kept.
    pub fn store(&self, key: &ReferenceKey, snapshots: &[Snapshot]) -> Result<()> {
        fs::create_dir_all(&self.root)?;
        let target = self.entry_dir(key);
        let scratch = self.root.join(format!(
            ".tmp-{}-{}-{}",
            key.digest(),
            std::process::id(),
            SCRATCH.fetch_add(1, Ordering::Relaxed)
        ));
        fs::create_dir_all(&scratch)?;
        for (k, snap) in snapshots.iter().enumerate() {
            snap.write(scratch.join(format!("snapshot-{k}.dat")))?;
        }
        fs::write(scratch.join("meta.txt"), format!("{}snapshots {}\n", key.text(), snapshots.len()))?;
        match fs::rename(&scratch, &target) {
            Ok(()) => Ok(()),
            Err(_) if target.join("meta.txt").exists() => {
                fs::remove_dir_all(&scratch)?;
                Ok(())
            }
            Err(e) => {
                let _ = fs::remove_dir_all(&scratch);
                Err(e.into())
            }
        }
    }

    /// Load the entry for `key` or compute and store it. The flag reports
    /// whether the result came from disk.
    pub fn get_or_compute(
        &self,
        key: &ReferenceKey,
        compute: impl FnOnce() -> Result<Vec<Snapshot>>,
    ) -> Result<(Vec<Snapshot>, bool)> {
        if let Some(found) = self.load(key)? {
            return Ok((found, true));
        }
        let fresh = compute()?;
        self.store(key, &fresh)?;
        Ok((fresh, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{PeriodicGrid, RealField};
    use crate::snapshot::SnapshotKind;

    fn key(eps: f64) -> ReferenceKey {
        ReferenceKey {
            equation: "splitting-nls".into(),
            coupling: "cubic".into(),
            initial: "gauss-logcosh-1d".into(),
            dim: 1,
            bounds: (-0.5, 1.5),
            points: 16,
            epsilon: eps,
            dt: eps / 100.0,
            times: vec![0.05, 0.13],
        }
    }

    #[test]
    fn distinct_keys_hash_apart() {
        assert_ne!(key(0.1).digest(), key(0.1000001).digest());
        assert_eq!(key(0.1).digest().len(), 64);
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ReferenceCache::new(dir.path());
        let g = PeriodicGrid::line(-0.5, 1.5, 16).unwrap();
        let snaps: Vec<Snapshot> = [0.05, 0.13]
            .iter()
            .map(|&t| Snapshot::from_scalar(&RealField::from_fn(&g, |x| x[0] * t), SnapshotKind::Phase, 0.1, t))
            .collect();
        let k = key(0.1);
        assert!(cache.load(&k).unwrap().is_none());
        let (first, cached) = cache.get_or_compute(&k, || Ok(snaps.clone())).unwrap();
        assert!(!cached);
        let (second, cached) = cache
            .get_or_compute(&k, || panic!("must come from disk"))
            .unwrap();
        assert!(cached);
        assert_eq!(first, second);
        // a second writer of the same key is harmless
        cache.store(&k, &snaps).unwrap();
        assert_eq!(cache.load(&k).unwrap().unwrap(), snaps);
        let leftovers = fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 1);
    }
}
