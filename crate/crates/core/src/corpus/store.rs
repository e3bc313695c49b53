//! On-disk repository store: `<dir>/<owner>__<name>/README.md` plus
//! `meta.json` with `repo_id`, `full_name` and `detected_language_present`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{validate_full_name, RepoRecord};
use crate::error::{Error, Result};

fn repo_dir(root: &Path, full_name: &str) -> PathBuf {
    root.join(full_name.replace('/', "__"))
}

pub fn write_repo(root: impl AsRef<Path>, record: &RepoRecord) -> Result<PathBuf> {
    let dir = repo_dir(root.as_ref(), &record.full_name);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let meta = dir.join("meta.json");
    let json = serde_json::to_string_pretty(record).expect("record serializes");
    fs::write(&meta, json + "\n").map_err(|e| Error::io(&meta, e))?;
    let readme = dir.join("README.md");
    fs::write(&readme, &record.readme_bytes).map_err(|e| Error::io(&readme, e))?;
    Ok(dir)
}

pub fn read_repo(dir: impl AsRef<Path>) -> Result<RepoRecord> {
    let dir = dir.as_ref();
    let meta_path = dir.join("meta.json");
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let mut record: RepoRecord = serde_json::from_str(&text)
        .map_err(|e| Error::Malformed { line: e.line(), message: format!("{}: {e}", meta_path.display()) })?;
    validate_full_name(&record.full_name)?;
    let readme = dir.join("README.md");
    record.readme_bytes = match fs::read(&readme) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(Error::io(&readme, e)),
    };
    Ok(record)
}

/// Every repository under `root`, ordered by directory name.
pub fn read_repo_store(root: impl AsRef<Path>) -> Result<Vec<RepoRecord>> {
    let root = root.as_ref();
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.join("meta.json").is_file())
        .collect();
    dirs.sort();
    dirs.iter().map(read_repo).collect()
}
