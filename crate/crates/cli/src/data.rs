use std::io;
use std::path::{Path, PathBuf};

use nidsbench::dataset::{kdd99_schema, load_dataset, sha256_file, Dataset, DatasetName};
use nidsbench::preprocess::{apply_variant, select_attributes, AttackCategoryMap};
use nidsbench::{Error, Result};

use crate::config::RunConfig;

/// Environment variable naming the dataset cache directory.
pub const CACHE_ENV: &str = "NIDSBENCH_CACHE";

/// `$NIDSBENCH_CACHE`, or `data` under the working directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from("data"), PathBuf::from)
}

/// Resolves a dataset name to its cached file, or accepts a path.
pub fn resolve_dataset(dataset: &str) -> Result<PathBuf> {
    if let Ok(name) = dataset.parse::<DatasetName>() {
        let dir = cache_dir();
        return name.locate(&dir).ok_or_else(|| Error::Io {
            path: dir.join(name.file_name()),
            source: io::Error::new(
                io::ErrorKind::NotFound,
                format!(
                    "{} not found in cache; run `nidsbench fetch --data {}` or set {CACHE_ENV}",
                    name.as_str(),
                    name.as_str()
                ),
            ),
        });
    }
    let path = PathBuf::from(dataset);
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::Io {
            path,
            source: io::Error::new(io::ErrorKind::NotFound, "dataset file not found"),
        })
    }
}

/// A dataset after relabeling and attribute selection, with its source.
pub struct Prepared {
    pub data: Dataset,
    pub source: PathBuf,
    pub sha256: String,
}

pub fn load_raw(path: &Path) -> Result<Dataset> {
    load_dataset(path, kdd99_schema())
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    let source = resolve_dataset(&cfg.dataset)?;
    let sha256 = sha256_file(&source)?;
    let raw = load_raw(&source)?;
    let relabeled = apply_variant(&raw, cfg.variant, &AttackCategoryMap::kdd99())?;
    let data = select_attributes(&relabeled, &cfg.attrs.spec(relabeled.schema().len()))?;
    Ok(Prepared { data, source, sha256 })
}
