//! On-disk cache of component matrices. Entries are JSON wrappers around the
//! matrix CSV, keyed by algebra, span kind, weight, degree and an enumeration
//! schema, with a SHA-256 checksum of the payload. Writes go through a
//! temporary file and a rename.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{graded_component, Algebra, Component};
use crate::error::{Error, Result};
use crate::lie::{BracketWord, SpanKind};
use crate::linalg::QMatrix;
use crate::poly::Monomial;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "ZETALIE_CACHE_DIR";
/// Bumped whenever word enumeration or column order changes.
pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Entry {
    schema: String,
    algebra: String,
    kind: String,
    weight: u32,
    degree: usize,
    words: Vec<String>,
    columns: Vec<Vec<u32>>,
    matrix_csv: String,
    sha256: String,
}

fn schema(kind: SpanKind) -> String {
    format!("{}-{SCHEMA_VERSION}", kind.tag())
}

fn checksum(words: &[String], columns: &[Vec<u32>], csv: &str) -> String {
    let mut h = Sha256::new();
    for w in words {
        h.update(w.as_bytes());
        h.update(b"\n");
    }
    for c in columns {
        h.update(format!("{c:?}\n").as_bytes());
    }
    h.update(csv.as_bytes());
    hex::encode(h.finalize())
}

/// How [`ComponentCache::get_or_compute`] obtained its component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// The stored entry was corrupt and has been replaced.
    Recomputed,
}

#[derive(Clone, Debug)]
pub struct ComponentCache {
    dir: PathBuf,
}

impl ComponentCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ComponentCache { dir: dir.into() }
    }

    /// The directory from [`CACHE_DIR_ENV`], if set and nonempty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, algebra: Algebra, weight: u32, degree: usize, kind: SpanKind) -> PathBuf {
        self.dir.join(format!("{algebra}-{}-w{weight}-r{degree}.json", schema(kind)))
    }

    /// `Ok(None)` when absent; [`Error::CorruptCache`] when unreadable or the
    /// checksum or shape disagrees.
    pub fn load(&self, algebra: Algebra, weight: u32, degree: usize, kind: SpanKind) -> Result<Option<Component>> {
        let path = self.path_for(algebra, weight, degree, kind);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| Error::CorruptCache { path: path.clone(), reason };
        let entry: Entry = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if entry.schema != schema(kind)
            || entry.algebra != algebra.name()
            || entry.kind != kind.tag()
            || (entry.weight, entry.degree) != (weight, degree)
        {
            return Err(corrupt("key fields do not match the file name".into()));
        }
        if checksum(&entry.words, &entry.columns, &entry.matrix_csv) != entry.sha256 {
            return Err(corrupt("checksum mismatch".into()));
        }
        let words = entry
            .words
            .iter()
            .map(|w| w.parse::<BracketWord>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| corrupt(e.to_string()))?;
        let columns: Vec<Monomial> = entry.columns.into_iter().map(Monomial::new).collect();
        let matrix = QMatrix::from_csv(&entry.matrix_csv, columns.len()).map_err(|e| corrupt(e.to_string()))?;
        Component::from_matrix(algebra, weight, degree, kind, words, columns, matrix)
            .map(Some)
            .map_err(|e| corrupt(e.to_string()))
    }

    pub fn store(&self, c: &Component) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let words: Vec<String> = c.words.iter().map(ToString::to_string).collect();
        let columns: Vec<Vec<u32>> = c.columns.iter().map(|m| m.exps().to_vec()).collect();
        let matrix_csv = c.matrix.to_csv();
        let sha256 = checksum(&words, &columns, &matrix_csv);
        let entry = Entry {
            schema: schema(c.kind),
            algebra: c.algebra.name().into(),
            kind: c.kind.tag().into(),
            weight: c.weight,
            degree: c.degree,
            words,
            columns,
            matrix_csv,
            sha256,
        };
        let path = self.path_for(c.algebra, c.weight, c.degree, c.kind);
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute(&self, algebra: Algebra, weight: u32, degree: usize, kind: SpanKind) -> Result<(Component, CacheOutcome)> {
        let outcome = match self.load(algebra, weight, degree, kind) {
            Ok(Some(c)) => return Ok((c, CacheOutcome::Hit)),
            Ok(None) => CacheOutcome::Miss,
            Err(Error::CorruptCache { .. }) => CacheOutcome::Recomputed,
            Err(e) => return Err(e),
        };
        let c = graded_component(algebra, weight, degree, kind)?;
        self.store(&c)?;
        Ok((c, outcome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_outcomes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ComponentCache::new(dir.path().join("nested"));
        let (c, o) = cache.get_or_compute(Algebra::Even, 12, 2, SpanKind::Lyndon).unwrap();
        assert_eq!(o, CacheOutcome::Miss);
        let (c2, o2) = cache.get_or_compute(Algebra::Even, 12, 2, SpanKind::Lyndon).unwrap();
        assert_eq!(o2, CacheOutcome::Hit);
        assert_eq!(c, c2);
        assert_eq!(c2.row_polys(), c.row_polys());
        assert!(cache.load(Algebra::Depth, 12, 2, SpanKind::Lyndon).unwrap().is_none());
    }

    #[test]
    fn corruption_is_detected_and_repaired() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ComponentCache::new(dir.path());
        let (c, _) = cache.get_or_compute(Algebra::Depth, 11, 3, SpanKind::Lyndon).unwrap();
        let path = cache.path_for(Algebra::Depth, 11, 3, SpanKind::Lyndon);
        let text = fs::read_to_string(&path).unwrap();
        let tampered = text.replacen("\"matrix_csv\":\"", "\"matrix_csv\":\"9", 1);
        assert_ne!(text, tampered);
        fs::write(&path, tampered).unwrap();
        assert!(matches!(cache.load(Algebra::Depth, 11, 3, SpanKind::Lyndon), Err(Error::CorruptCache { .. })));
        let (c2, o) = cache.get_or_compute(Algebra::Depth, 11, 3, SpanKind::Lyndon).unwrap();
        assert_eq!(o, CacheOutcome::Recomputed);
        assert_eq!(c, c2);
        fs::write(&path, "not json").unwrap();
        assert!(matches!(cache.load(Algebra::Depth, 11, 3, SpanKind::Lyndon), Err(Error::CorruptCache { .. })));
    }

    #[test]
    fn span_kinds_use_separate_entries() {
        let cache = ComponentCache::new("/nonexistent");
        assert_ne!(
            cache.path_for(Algebra::Block, 9, 3, SpanKind::Lyndon),
            cache.path_for(Algebra::Block, 9, 3, SpanKind::LeftNormed)
        );
    }
}
