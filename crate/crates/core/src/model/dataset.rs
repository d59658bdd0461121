use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::SourceFormat;

/// One image file discovered in a dataset directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub id: String,
    pub path: PathBuf,
    pub format: SourceFormat,
}

impl DatasetEntry {
    /// Entry for a single image file outside any scanned directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let format = path
            .extension()
            .and_then(|e| e.to_str())
            .and_then(SourceFormat::from_extension)
            .ok_or(Error::UnsupportedFormat)?;
        let id = image_id_from_path(path)
            .ok_or_else(|| Error::InvalidInput(format!("no file name in {}", path.display())))?;
        Ok(Self {
            id,
            path: path.to_path_buf(),
            format,
        })
    }

    /// Sidecar text-box file path: same stem, `.boxes.json`.
    pub fn boxes_path(&self) -> PathBuf {
        self.path.with_file_name(format!("{}.boxes.json", self.id))
    }
}

/// Sorted listing of the PNG/BMP files in a directory, keyed by filename stem.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    root: PathBuf,
    entries: Vec<DatasetEntry>,
}

pub fn image_id_from_path(path: &Path) -> Option<String> {
    path.file_stem().and_then(|s| s.to_str()).map(str::to_owned)
}

impl Dataset {
    /// Scan `dir` (non-recursively) for `.png` / `.bmp` files.
    ///
    /// Two files sharing a stem (`a.png` and `a.bmp`) are a load-time error.
    pub fn scan(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let read = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut by_id: BTreeMap<String, DatasetEntry> = BTreeMap::new();
        for item in read {
            let item = item.map_err(|e| Error::io(dir, e))?;
            let path = item.path();
            if !path.is_file() {
                continue;
            }
            let Some(format) = path
                .extension()
                .and_then(|e| e.to_str())
                .and_then(SourceFormat::from_extension)
            else {
                continue;
            };
            let Some(id) = image_id_from_path(&path) else {
                continue;
            };
            if by_id.contains_key(&id) {
                return Err(Error::DuplicateId(id));
            }
            by_id.insert(id.clone(), DatasetEntry { id, path, format });
        }
        Ok(Self {
            root: dir.to_path_buf(),
            entries: by_id.into_values().collect(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.id.as_str())
    }
}
