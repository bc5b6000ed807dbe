//! Atomic file writes and SHA-256 sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::{CmdError, CmdResult};

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// `<path>.sha256`, preserving the full original file name.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".sha256");
    path.with_file_name(name)
}

/// `<path>.meta`, preserving the full original file name.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta");
    path.with_file_name(name)
}

/// Writes via a same-directory temporary and a rename, so readers never
/// observe a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CmdResult<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)
        .map_err(|e| CmdError::usage(format!("write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CmdError::usage(format!("rename to {}: {e}", path.display())))
}

/// Writes `bytes` atomically and a `<name>.sha256` sidecar in the
/// two-space `sha256sum` format. Returns the hex digest.
pub fn write_with_hash(path: &Path, bytes: &[u8]) -> CmdResult<String> {
    write_atomic(path, bytes)?;
    let hex = sha256_hex(bytes);
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_atomic(&sidecar_path(path), format!("{hex}  {name}\n").as_bytes())?;
    Ok(hex)
}

/// Recomputes the hash of `path` and compares it against the sidecar.
pub fn check_sidecar(path: &Path) -> CmdResult<()> {
    let bytes = fs::read(path)
        .map_err(|e| CmdError::usage(format!("read {}: {e}", path.display())))?;
    let side = sidecar_path(path);
    let recorded = fs::read_to_string(&side)
        .map_err(|e| CmdError::usage(format!("read {}: {e}", side.display())))?;
    let recorded_hex = recorded.split_whitespace().next().unwrap_or_default();
    let actual = sha256_hex(&bytes);
    if recorded_hex != actual {
        return Err(CmdError::failed(format!(
            "hash mismatch for {}: sidecar {recorded_hex}, file {actual}",
            path.display()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_matches_known_vector() {
        // sha256("abc"), a fixed point of every implementation.
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn sidecar_roundtrip() {
        let dir = std::env::temp_dir().join("wordent-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sample.json");
        write_with_hash(&path, b"{}\n").unwrap();
        check_sidecar(&path).unwrap();
        std::fs::write(&path, b"{ }\n").unwrap();
        assert!(check_sidecar(&path).is_err());
    }

    #[test]
    fn sidecar_names_keep_extensions() {
        assert_eq!(
            sidecar_path(Path::new("a/b/report.json")),
            PathBuf::from("a/b/report.json.sha256")
        );
        assert_eq!(
            meta_path(Path::new("w.txt")),
            PathBuf::from("w.txt.meta")
        );
    }
}
