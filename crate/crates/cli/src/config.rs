use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use nidsbench::preprocess::{PreprocessVariant, SelectionSpec};
use nidsbench::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nb,
    J48,
    Knn,
    Mlp,
    Svm,
    Snb,
    Ht,
    Wknn,
    Ozaboost,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Nb,
        Algorithm::J48,
        Algorithm::Knn,
        Algorithm::Mlp,
        Algorithm::Svm,
        Algorithm::Snb,
        Algorithm::Ht,
        Algorithm::Wknn,
        Algorithm::Ozaboost,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nb => "nb",
            Algorithm::J48 => "j48",
            Algorithm::Knn => "knn",
            Algorithm::Mlp => "mlp",
            Algorithm::Svm => "svm",
            Algorithm::Snb => "snb",
            Algorithm::Ht => "ht",
            Algorithm::Wknn => "wknn",
            Algorithm::Ozaboost => "ozaboost",
        }
    }

    pub fn is_stream(self) -> bool {
        matches!(self, Algorithm::Snb | Algorithm::Ht | Algorithm::Wknn | Algorithm::Ozaboost)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

/// Which attributes to keep: the default 12, all 41, or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AttrChoice {
    #[default]
    Selected,
    All,
    List(SelectionSpec),
}

impl AttrChoice {
    pub fn spec(&self, attribute_count: usize) -> SelectionSpec {
        match self {
            AttrChoice::Selected => SelectionSpec::default(),
            AttrChoice::All => SelectionSpec::all(attribute_count),
            AttrChoice::List(s) => s.clone(),
        }
    }
}

impl fmt::Display for AttrChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrChoice::Selected => f.write_str("selected"),
            AttrChoice::All => f.write_str("all"),
            AttrChoice::List(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for AttrChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "selected" => Ok(AttrChoice::Selected),
            "all" => Ok(AttrChoice::All),
            list => Ok(AttrChoice::List(list.parse()?)),
        }
    }
}

impl TryFrom<String> for AttrChoice {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AttrChoice> for String {
    fn from(a: AttrChoice) -> Self {
        a.to_string()
    }
}

/// Everything that determines a run. Serialized into every manifest; feeding
/// it back with `--config` repeats the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `kdd99-10`, `nsl-kdd` or a path to a raw record file.
    pub dataset: String,
    pub variant: PreprocessVariant,
    pub attrs: AttrChoice,
    pub algorithms: Vec<Algorithm>,
    /// Neighbours for `knn` and `wknn`.
    pub k: usize,
    pub folds: usize,
    /// Fading factor for prequential runs.
    pub alpha: f64,
    pub seed: u64,
    /// Stratified training subsample for `knn`.
    pub sample: Option<usize>,
    /// Keep every n-th trace row in CSV and SVG output.
    pub trace_step: usize,
    /// Instances used to fit the stream normalizer.
    pub warmup: usize,
    /// Window size for `wknn`.
    pub window: usize,
    /// Members for `ozaboost`.
    pub ensemble_size: usize,
    /// Training epochs for `mlp`.
    pub epochs: usize,
    pub drift_threshold: f64,
    pub drift_window: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::batch_default()
    }
}

impl RunConfig {
    /// NSL-KDD, variant 1, J48.
    pub fn batch_default() -> Self {
        RunConfig {
            dataset: "nsl-kdd".into(),
            variant: PreprocessVariant::V1,
            attrs: AttrChoice::Selected,
            algorithms: vec![Algorithm::J48],
            k: 3,
            folds: 10,
            alpha: 0.95,
            seed: 1,
            sample: None,
            trace_step: 100,
            warmup: 1000,
            window: 5000,
            ensemble_size: 10,
            epochs: 10,
            drift_threshold: nidsbench::eval::DEFAULT_DROP_THRESHOLD,
            drift_window: nidsbench::eval::DEFAULT_DRIFT_WINDOW,
            out: PathBuf::from("results"),
        }
    }

    /// KDD99-10, variant 2, Hoeffding tree.
    pub fn stream_default() -> Self {
        RunConfig {
            dataset: "kdd99-10".into(),
            variant: PreprocessVariant::V2,
            algorithms: vec![Algorithm::Ht],
            ..RunConfig::batch_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithm given".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1]", self.alpha)));
        }
        if self.trace_step == 0 || self.warmup == 0 || self.ensemble_size == 0 || self.epochs == 0 {
            return Err(Error::Config("trace_step, warmup, ensemble_size and epochs must be positive".into()));
        }
        if self.sample == Some(0) {
            return Err(Error::Config("sample must be positive".into()));
        }
        Ok(())
    }

    /// Short dataset label for file names.
    pub fn dataset_label(&self) -> String {
        let base = std::path::Path::new(&self.dataset)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.dataset.clone());
        base.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect()
    }

    /// File-name stem shared by all artifacts of one algorithm's run.
    pub fn stem(&self, algorithm: Algorithm) -> String {
        format!(
            "{}_{}_{}_seed{}",
            self.dataset_label(),
            self.variant.as_str(),
            algorithm,
            self.seed
        )
    }

    /// Stem for artifacts covering all algorithms of a run.
    pub fn group_stem(&self) -> String {
        format!("{}_{}_seed{}", self.dataset_label(), self.variant.as_str(), self.seed)
    }
}
