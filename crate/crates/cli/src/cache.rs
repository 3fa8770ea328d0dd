//! On-disk result cache. Entries are the CSV rendering of the result tables,
//! keyed by a SHA-256 of the canonical request, and written atomically.

use std::fs;
use std::path::{Path, PathBuf};

use kuo_core::CurveTable;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::output::{parse_tables, render_csv};

pub fn key(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.csv"))
}

pub fn load(dir: &Path, key: &str) -> CliResult<Option<Vec<CurveTable>>> {
    let path = entry_path(dir, key);
    match fs::read_to_string(&path) {
        Ok(text) => match parse_tables(&text) {
            Ok(tables) => {
                log::info!("cache hit {key}");
                Ok(Some(tables))
            }
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                Ok(None)
            }
        },
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            log::info!("cache miss {key}");
            Ok(None)
        }
        Err(e) => Err(CliError::io(path, e)),
    }
}

pub fn store(dir: &Path, key: &str, tables: &[CurveTable]) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = entry_path(dir, key);
    let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    fs::write(&tmp, render_csv(tables)).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_is_stable_hex() {
        let k = key("eigen beta=1");
        assert_eq!(k.len(), 64);
        assert_eq!(k, key("eigen beta=1"));
        assert_ne!(k, key("eigen beta=2"));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = CurveTable::new("x", &["y", "error_estimate"]).with_meta("note", "a = b");
        t.push(vec![0.1, 1.0 / 3.0, 0.0]);
        let k = key("round trip");
        assert!(load(dir.path(), &k).unwrap().is_none());
        store(dir.path(), &k, std::slice::from_ref(&t)).unwrap();
        assert_eq!(load(dir.path(), &k).unwrap().unwrap(), vec![t]);
    }
}
