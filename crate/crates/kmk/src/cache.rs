//! Content-addressed cache for basis tables.
//!
//! Keys hash the GCM, the interval bound, the convention fingerprint, and
//! the schema version, so a table computed under one convention can never
//! be served under another. Writes go through a temporary file and an
//! atomic rename; corrupt or mismatched entries are evicted and the caller
//! recomputes. Cache trouble degrades to recomputation, never to failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::bruhat::enumerate_interval;
use crate::engine::{PhiTable, CONVENTION_FINGERPRINT, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

pub const CACHE_DIR_ENV: &str = "KMK_CACHE_DIR";

/// The cache directory: the environment override, else a per-user
/// directory under the home cache, else the system temp dir.
pub fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var(CACHE_DIR_ENV) {
        return PathBuf::from(dir);
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home).join(".cache").join("kmk");
    }
    std::env::temp_dir().join("kmk-cache")
}

/// Content hash of everything that determines a table.
pub fn table_key(gcm: &crate::gcm::Gcm, bound: usize) -> String {
    let ingredients = serde_json::json!({
        "schema": SCHEMA_VERSION,
        "fingerprint": CONVENTION_FINGERPRINT,
        "gcm": gcm.entries(),
        "labels": gcm.labels(),
        "bound": bound,
    });
    let mut hasher = Sha256::new();
    hasher.update(ingredients.to_string().as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_path(key: &str) -> PathBuf {
    cache_dir().join(format!("{key}.kmk"))
}

/// Serializes and stores a table; errors are reported but callers may treat
/// them as warnings.
pub fn cache_put(table: &PhiTable) -> Result<PathBuf> {
    let dir = cache_dir();
    fs::create_dir_all(&dir)?;
    let rd = table.datum();
    let key = table_key(rd.gcm(), table.interval().bound());
    let payload = serde_json::json!({
        "version": SCHEMA_VERSION,
        "fingerprint": CONVENTION_FINGERPRINT,
        "gcm": rd.gcm().entries(),
        "labels": rd.gcm().labels(),
        "bound": table.interval().bound(),
        "metadata": {
            "element_count": table.interval().len(),
            "created_unix": std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        },
        "rows": table.rows_to_json(),
    });
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| Error::Cache(format!("temp file: {e}")))?;
    tmp.write_all(payload.to_string().as_bytes())?;
    let path = entry_path(&key);
    tmp.persist(&path)
        .map_err(|e| Error::Cache(format!("rename: {e}")))?;
    Ok(path)
}

/// Loads a table if a valid entry exists; corrupt or mismatched entries are
/// evicted silently.
pub fn cache_get(rd: &RootDatum, bound: usize, element_cap: usize) -> Option<PhiTable> {
    let key = table_key(rd.gcm(), bound);
    let path = entry_path(&key);
    let text = fs::read_to_string(&path).ok()?;
    let evict = || {
        let _ = fs::remove_file(&path);
    };
    let Ok(payload) = serde_json::from_str::<serde_json::Value>(&text) else {
        evict();
        return None;
    };
    let fingerprint_ok = payload["fingerprint"].as_str() == Some(CONVENTION_FINGERPRINT)
        && payload["version"].as_u64() == Some(SCHEMA_VERSION as u64)
        && payload["bound"].as_u64() == Some(bound as u64);
    if !fingerprint_ok {
        evict();
        return None;
    }
    let gcm_match = serde_json::json!(rd.gcm().entries()) == payload["gcm"];
    if !gcm_match {
        evict();
        return None;
    }
    let Ok(interval) = enumerate_interval(rd, bound, None, element_cap) else {
        evict();
        return None;
    };
    match PhiTable::from_json_rows(interval, &payload["rows"]) {
        Ok(table) => Some(table),
        Err(_) => {
            evict();
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::DEFAULT_ELEMENT_CAP;
    use crate::gcm::preset;
    use crate::root_datum::build_realization;

    // the cache directory is process-global state, so tests that point it
    // at a scratch directory take this lock
    static ENV_LOCK: std::sync::Mutex<()> = std::sync::Mutex::new(());

    fn with_temp_cache<T>(f: impl FnOnce() -> T) -> T {
        let _guard = ENV_LOCK.lock().unwrap();
        let dir = tempfile::tempdir().unwrap();
        std::env::set_var(CACHE_DIR_ENV, dir.path());
        let out = f();
        std::env::remove_var(CACHE_DIR_ENV);
        out
    }

    #[test]
    fn put_then_get_round_trips() {
        with_temp_cache(|| {
            let rd = build_realization(preset("A2").unwrap());
            let table = PhiTable::build(&rd, 2, DEFAULT_ELEMENT_CAP).unwrap();
            cache_put(&table).unwrap();
            let loaded = cache_get(&rd, 2, DEFAULT_ELEMENT_CAP).expect("cache hit");
            for w in 0..table.interval().len() {
                for x in 0..table.interval().len() {
                    assert_eq!(table.value(w, x), loaded.value(w, x));
                }
            }
        });
    }

    #[test]
    fn mismatched_bound_misses() {
        with_temp_cache(|| {
            let rd = build_realization(preset("A2").unwrap());
            let table = PhiTable::build(&rd, 2, DEFAULT_ELEMENT_CAP).unwrap();
            cache_put(&table).unwrap();
            assert!(cache_get(&rd, 3, DEFAULT_ELEMENT_CAP).is_none());
        });
    }

    #[test]
    fn corrupted_entry_is_evicted() {
        with_temp_cache(|| {
            let rd = build_realization(preset("A1").unwrap());
            let table = PhiTable::build(&rd, 1, DEFAULT_ELEMENT_CAP).unwrap();
            let path = cache_put(&table).unwrap();
            std::fs::write(&path, b"{not json").unwrap();
            assert!(cache_get(&rd, 1, DEFAULT_ELEMENT_CAP).is_none());
            assert!(!path.exists());
        });
    }
}
