//! Content-addressed on-disk cache of universal formal group laws.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::law::{FGLaw, Provenance};
use super::log::{universal_law, Scheme};
use super::series::{BiSeries, SeriesFile};
use crate::algebra::Presentation;
use crate::error::Result;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "CHROMATIC_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct LawCache {
    dir: PathBuf,
}

/// Canonical serialized form of a series: pretty JSON with a trailing newline.
pub fn series_bytes(series: &BiSeries) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(&series.to_file()).expect("series serializes");
    s.push('\n');
    s.into_bytes()
}

impl LawCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        LawCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(LawCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the law's identity.
    pub fn key(p: u32, order: usize, scheme: Scheme, identity: &str) -> String {
        let text = format!(
            "p={p};order={order};scheme={};law={identity}",
            scheme.name()
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<BiSeries>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let file: SeriesFile = serde_json::from_slice(&fs::read(path)?)?;
        Ok(Some(BiSeries::from_file(&file)?))
    }

    pub fn store(&self, key: &str, series: &BiSeries) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(key);
        let tmp = self
            .dir
            .join(format!("{key}.json.tmp{}", std::process::id()));
        fs::write(&tmp, series_bytes(series))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// The universal law, read from the cache when present.
    pub fn universal(&self, p: u32, order: usize, scheme: Scheme) -> Result<FGLaw> {
        let key = Self::key(p, order, scheme, "universal");
        if let Some(series) = self.load(&key)? {
            let pres = Arc::new(Presentation::free(series.ring()));
            return Ok(FGLaw::new(
                series,
                pres,
                p,
                true,
                Provenance::Universal { scheme },
            ));
        }
        let law = universal_law(p, order, scheme)?;
        self.store(&key, law.series())?;
        Ok(law)
    }
}

/// Universal law through an optional cache.
pub fn cached_universal(
    cache: Option<&LawCache>,
    p: u32,
    order: usize,
    scheme: Scheme,
) -> Result<FGLaw> {
    match cache {
        Some(c) => c.universal(p, order, scheme),
        None => universal_law(p, order, scheme),
    }
}
