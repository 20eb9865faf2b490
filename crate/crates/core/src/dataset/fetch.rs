//! Digest-checked download of the public dataset files into a local cache.

use std::fs::{self, File};
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetName {
    /// The 10% KDD Cup 1999 training subset (494021 records).
    Kdd99Ten,
    /// NSL-KDD `KDDTrain+` (125973 records).
    NslKdd,
}

impl DatasetName {
    pub fn as_str(self) -> &'static str {
        match self {
            DatasetName::Kdd99Ten => "kdd99-10",
            DatasetName::NslKdd => "nsl-kdd",
        }
    }

    pub fn default_url(self) -> &'static str {
        match self {
            DatasetName::Kdd99Ten => "http://kdd.ics.uci.edu/databases/kddcup99/kddcup.data_10_percent.gz",
            DatasetName::NslKdd => "https://raw.githubusercontent.com/defcom17/NSL_KDD/master/KDDTrain%2B.txt",
        }
    }

    /// File name inside the cache directory.
    pub fn file_name(self) -> &'static str {
        match self {
            DatasetName::Kdd99Ten => "kddcup.data_10_percent.gz",
            DatasetName::NslKdd => "KDDTrain+.txt",
        }
    }

    /// Names under which an already-present copy is recognised, in
    /// preference order.
    pub fn candidate_file_names(self) -> &'static [&'static str] {
        match self {
            DatasetName::Kdd99Ten => &["kddcup.data_10_percent.gz", "kddcup.data_10_percent", "kddcup.data_10_percent_corrected"],
            DatasetName::NslKdd => &["KDDTrain+.txt", "KDDTrain+.txt.gz"],
        }
    }

    /// First candidate file present in `dir`.
    pub fn locate(self, dir: &Path) -> Option<PathBuf> {
        self.candidate_file_names()
            .iter()
            .map(|n| dir.join(n))
            .find(|p| p.is_file())
    }
}

impl FromStr for DatasetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kdd99-10" => Ok(DatasetName::Kdd99Ten),
            "nsl-kdd" => Ok(DatasetName::NslKdd),
            _ => Err(Error::Config(format!("unknown dataset {s:?}"))),
        }
    }
}

/// Lower-case hex SHA-256 of a file's contents.
pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::with_capacity(1 << 20, file);
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = reader.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Makes sure `cache_dir` holds the dataset file with the expected digest
/// and returns its path.
///
/// A cached copy with a matching digest is returned without touching the
/// network. A cached copy with the wrong digest is deleted and downloaded
/// again. A download whose digest does not match is deleted and reported as
/// [`Error::DigestMismatch`].
pub fn fetch_dataset(name: DatasetName, url: &str, expected_digest: &str, cache_dir: impl AsRef<Path>) -> Result<PathBuf> {
    let cache_dir = cache_dir.as_ref();
    let expected = expected_digest.trim().to_ascii_lowercase();
    if expected.len() != 64 || !expected.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Config(format!("not a SHA-256 hex digest: {expected_digest:?}")));
    }
    fs::create_dir_all(cache_dir).map_err(|e| Error::io(cache_dir, e))?;
    let target = cache_dir.join(name.file_name());

    if target.is_file() {
        if sha256_file(&target)? == expected {
            return Ok(target);
        }
        fs::remove_file(&target).map_err(|e| Error::io(&target, e))?;
    }

    let partial = cache_dir.join(format!("{}.part", name.file_name()));
    let result = download(url, &partial).and_then(|()| {
        let actual = sha256_file(&partial)?;
        if actual == expected {
            Ok(())
        } else {
            Err(Error::DigestMismatch {
                path: target.clone(),
                expected: expected.clone(),
                actual,
            })
        }
    });
    if let Err(e) = result {
        let _ = fs::remove_file(&partial);
        return Err(e);
    }
    fs::rename(&partial, &target).map_err(|e| Error::io(&target, e))?;
    Ok(target)
}

fn download(url: &str, dest: &Path) -> Result<()> {
    let net = |message: String| Error::Network {
        url: url.to_owned(),
        message,
    };
    let agent = ureq::AgentBuilder::new()
        .timeout_connect(Duration::from_secs(30))
        .timeout_read(Duration::from_secs(120))
        .build();
    let response = agent.get(url).call().map_err(|e| net(e.to_string()))?;
    let mut reader = response.into_reader();
    let mut file = File::create(dest).map_err(|e| Error::io(dest, e))?;
    io::copy(&mut reader, &mut file).map_err(|e| net(e.to_string()))?;
    file.flush().map_err(|e| Error::io(dest, e))?;
    Ok(())
}
