use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Instance};
use crate::{Error, Result};

/// The default 12 kept attributes, 1-based.
pub const DEFAULT_SELECTION: [usize; 12] = [1, 2, 5, 6, 9, 23, 24, 29, 32, 33, 34, 36];

/// Strictly increasing 1-based attribute indices to keep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SelectionSpec(Vec<usize>);

impl SelectionSpec {
    pub fn new(keep: Vec<usize>) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Config("attribute selection is empty".into()));
        }
        if keep.contains(&0) {
            return Err(Error::AttributeIndex { index: 0, max: usize::MAX });
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("attribute indices must be strictly increasing: {keep:?}")));
        }
        Ok(SelectionSpec(keep))
    }

    /// `1..=n`.
    pub fn all(n: usize) -> Self {
        SelectionSpec((1..=n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

impl Default for SelectionSpec {
    fn default() -> Self {
        SelectionSpec(DEFAULT_SELECTION.to_vec())
    }
}

impl TryFrom<Vec<usize>> for SelectionSpec {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        SelectionSpec::new(v)
    }
}

impl From<SelectionSpec> for Vec<usize> {
    fn from(s: SelectionSpec) -> Self {
        s.0
    }
}

impl fmt::Display for SelectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `i,j,k` (sorted and deduplicated before validation).
impl FromStr for SelectionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut keep = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad attribute index {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        keep.sort_unstable();
        keep.dedup();
        SelectionSpec::new(keep)
    }
}

/// Keeps only the selected attributes, in their original relative order.
pub fn select_attributes(ds: &Dataset, spec: &SelectionSpec) -> Result<Dataset> {
    let max = ds.schema().len();
    if let Some(&bad) = spec.indices().iter().find(|&&i| i == 0 || i > max) {
        return Err(Error::AttributeIndex { index: bad, max });
    }
    let zero_based: Vec<usize> = spec.indices().iter().map(|i| i - 1).collect();
    let attributes = zero_based.iter().map(|&i| ds.schema().attribute(i).clone()).collect();
    let instances = ds
        .instances()
        .iter()
        .map(|inst| Instance::new(zero_based.iter().map(|&i| inst.values[i]).collect(), inst.label))
        .collect();
    let mut provenance = ds.provenance().to_vec();
    provenance.push(format!("attributes: {spec}"));
    Ok(Dataset::from_parts(ds.schema().with_attributes(attributes), instances, provenance))
}
