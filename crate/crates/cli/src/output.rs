//! Atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::{CliError, Result};

/// Directory that receives the files of one command.
#[derive(Debug, Clone)]
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Writes `name` through a temporary file in the same directory and renames it into place.
    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let target = self.path(name);
        let mut tmp = NamedTempFile::new_in(&self.root).map_err(|e| CliError::io(&self.root, e))?;
        tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
        Ok(target)
    }
}

/// File name for the `k`-th of several outputs: `stem.ext` first, then `stem_label.ext`.
pub fn numbered(stem: &str, ext: &str, k: usize, label: &str) -> String {
    if k == 0 {
        format!("{stem}.{ext}")
    } else {
        let safe: String = label
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        format!("{stem}_{safe}.{ext}")
    }
}
