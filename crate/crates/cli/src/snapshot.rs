//! An immutable catalog plus its index, and the swappable handle the
//! service reads through.

use std::fs::File;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use seqdb_core::catalog::{load_catalog, RecordError};
use seqdb_core::exec::Mode;
use seqdb_core::generators::seed_catalog_with;
use seqdb_core::index::{build_index_with, find_matches, QueryError};
use seqdb_core::{Catalog, LexIndex, MatchResult, Query};

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("cannot read catalog {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

pub struct Snapshot {
    pub catalog: Catalog,
    pub index: LexIndex,
}

impl Snapshot {
    pub fn new(catalog: Catalog, mode: Mode) -> Snapshot {
        let index = build_index_with(&catalog, mode);
        Snapshot { catalog, index }
    }

    pub fn seed(mode: Mode) -> Snapshot {
        Snapshot::new(seed_catalog_with(mode), mode)
    }

    /// Ranked matches, cut to `limit`.
    pub fn lookup(&self, q: &Query, limit: usize) -> Result<Vec<MatchResult>, QueryError> {
        let mut ms = find_matches(&self.index, q)?;
        ms.truncate(limit);
        Ok(ms)
    }
}

/// Loads a catalog file, or the seed catalog when `path` is `None`.
/// Rejected records are returned alongside the snapshot.
pub fn load_snapshot(path: Option<&Path>, mode: Mode) -> Result<(Snapshot, Vec<RecordError>), SnapshotError> {
    let Some(path) = path else {
        return Ok((Snapshot::seed(mode), Vec::new()));
    };
    let io_err = |source| SnapshotError::Io { path: path.to_path_buf(), source };
    let file = File::open(path).map_err(io_err)?;
    let report = load_catalog(BufReader::new(file)).map_err(io_err)?;
    Ok((Snapshot::new(report.catalog, mode), report.errors))
}

/// Readers clone the current `Arc`; a reload swaps in a new one.
pub struct SharedSnapshot(RwLock<Arc<Snapshot>>);

impl SharedSnapshot {
    pub fn new(s: Snapshot) -> SharedSnapshot {
        SharedSnapshot(RwLock::new(Arc::new(s)))
    }

    pub fn current(&self) -> Arc<Snapshot> {
        self.0.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn replace(&self, s: Snapshot) -> Arc<Snapshot> {
        let s = Arc::new(s);
        *self.0.write().unwrap_or_else(|e| e.into_inner()) = s.clone();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqdb_core::catalog::Entry;
    use seqdb_core::{ANumber, TermList};

    #[test]
    fn replace_leaves_old_readers_intact() {
        let shared = SharedSnapshot::new(Snapshot::seed(Mode::Sequential));
        let before = shared.current();
        let mut c = Catalog::new();
        c.insert(Entry::new(ANumber::new(1).unwrap(), "x", TermList::from_i64s(0, &[1, 2, 3, 4]))).unwrap();
        shared.replace(Snapshot::new(c, Mode::Sequential));
        assert!(before.catalog.len() > 1);
        assert_eq!(shared.current().catalog.len(), 1);
    }

    #[test]
    fn lookup_truncates() {
        let s = Snapshot::seed(Mode::Sequential);
        let q = Query::new([1, 2, 3].map(Into::into).to_vec()).with_min_overlap(3);
        let all = s.lookup(&q, usize::MAX).unwrap();
        assert!(!all.is_empty());
        assert_eq!(s.lookup(&q, 1).unwrap(), all[..1]);
        assert!(s.lookup(&q, 0).unwrap().is_empty());
    }
}
