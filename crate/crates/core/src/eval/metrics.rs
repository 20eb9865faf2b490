use std::fmt::Write as _;

use crate::{Error, Result};

/// Counts indexed `[true class][predicted class]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub error: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
}

impl ConfusionMatrix {
    pub fn new(labels: &[String]) -> Self {
        let k = labels.len();
        ConfusionMatrix {
            labels: labels.to_vec(),
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn from_counts(labels: &[String], counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = labels.len();
        if counts.len() != k || counts.iter().any(|r| r.len() != k) {
            return Err(Error::Config(format!("confusion matrix must be {k}x{k}")));
        }
        Ok(ConfusionMatrix {
            labels: labels.to_vec(),
            counts,
        })
    }

    pub fn add(&mut self, actual: usize, predicted: usize) {
        self.counts[actual][predicted] += 1;
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (r, o) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in r.iter_mut().zip(o) {
                *a += b;
            }
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual][predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Trace over total; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.correct() as f64 / total as f64
        }
    }

    /// Accuracy, error and per-class precision and recall (0/0 taken as 0).
    pub fn metrics(&self) -> Result<Metrics> {
        let total = self.total();
        if total == 0 {
            return Err(Error::Config("metrics of an empty confusion matrix".into()));
        }
        let k = self.counts.len();
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = (0..k)
            .map(|c| ratio(self.counts[c][c], (0..k).map(|r| self.counts[r][c]).sum()))
            .collect();
        let recall = (0..k)
            .map(|c| ratio(self.counts[c][c], self.counts[c].iter().sum()))
            .collect();
        let accuracy = self.accuracy();
        Ok(Metrics {
            accuracy,
            error: 1.0 - accuracy,
            precision,
            recall,
        })
    }

    /// CSV with a header row of predicted labels and one row per true label.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("actual\\predicted");
        for l in &self.labels {
            s.push(',');
            s.push_str(l);
        }
        s.push('\n');
        for (l, row) in self.labels.iter().zip(&self.counts) {
            s.push_str(l);
            for c in row {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
        }
        s
    }
}
