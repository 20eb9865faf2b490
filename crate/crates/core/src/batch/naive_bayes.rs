use super::{BatchLearner, BatchModel};
use crate::dataset::{AttributeSchema, Dataset, Instance};
use crate::stats::GaussianEstimator;
use crate::{argmax, Result};

/// Sufficient statistics of a Naive Bayes model: class counts, per-class
/// symbol counts for nominal attributes and per-class Gaussian summaries
/// for numeric ones.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesStats {
    class_counts: Vec<f64>,
    /// `[attribute][class][symbol]`, `None` for numeric attributes.
    nominal: Vec<Option<Vec<Vec<f64>>>>,
    /// `[attribute][class]`, `None` for nominal attributes.
    numeric: Vec<Option<Vec<GaussianEstimator>>>,
    domain_sizes: Vec<usize>,
}

impl NaiveBayesStats {
    pub fn new(schema: &AttributeSchema) -> Self {
        let k = schema.num_classes();
        let nominal = (0..schema.len())
            .map(|a| schema.is_nominal(a).then(|| vec![vec![0.0; schema.domain_len(a)]; k]))
            .collect();
        let numeric = (0..schema.len())
            .map(|a| (!schema.is_nominal(a)).then(|| vec![GaussianEstimator::default(); k]))
            .collect();
        NaiveBayesStats {
            class_counts: vec![0.0; k],
            nominal,
            numeric,
            domain_sizes: (0..schema.len()).map(|a| schema.domain_len(a)).collect(),
        }
    }

    /// One-pass update (Welford for the numeric moments).
    pub fn update(&mut self, x: &Instance) {
        let c = x.label;
        self.class_counts[c] += 1.0;
        for (a, &v) in x.values.iter().enumerate() {
            if let Some(table) = &mut self.nominal[a] {
                let row = &mut table[c];
                let code = v as usize;
                if code >= row.len() {
                    row.resize(code + 1, 0.0);
                }
                row[code] += 1.0;
            } else if let Some(g) = &mut self.numeric[a] {
                g[c].add(v);
            }
        }
    }

    /// Statistics of a whole dataset, numeric moments computed two-pass.
    pub fn from_dataset(ds: &Dataset) -> Self {
        let schema = ds.schema();
        let k = schema.num_classes();
        let mut stats = NaiveBayesStats::new(schema);
        for x in ds.instances() {
            stats.class_counts[x.label] += 1.0;
            for (a, &v) in x.values.iter().enumerate() {
                if let Some(table) = &mut stats.nominal[a] {
                    table[x.label][v as usize] += 1.0;
                }
            }
        }
        let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); k];
        for a in 0..schema.len() {
            if stats.numeric[a].is_none() {
                continue;
            }
            per_class.iter_mut().for_each(Vec::clear);
            for x in ds.instances() {
                per_class[x.label].push(x.values[a]);
            }
            stats.numeric[a] = Some(per_class.iter().map(|v| GaussianEstimator::from_slice(v)).collect());
        }
        stats
    }

    pub fn class_counts(&self) -> &[f64] {
        &self.class_counts
    }

    pub fn nominal_counts(&self, attribute: usize, class: usize) -> Option<&[f64]> {
        self.nominal[attribute].as_ref().map(|t| t[class].as_slice())
    }

    pub fn gaussian(&self, attribute: usize, class: usize) -> Option<&GaussianEstimator> {
        self.numeric[attribute].as_ref().map(|g| &g[class])
    }

    /// log prior + Σ log likelihood per class. With no observations every
    /// class scores 0; classes never observed otherwise score -∞.
    pub fn log_scores(&self, x: &Instance) -> Vec<f64> {
        let total: f64 = self.class_counts.iter().sum();
        let k = self.class_counts.len();
        if total <= 0.0 {
            return vec![0.0; k];
        }
        (0..k)
            .map(|c| {
                let nc = self.class_counts[c];
                if nc <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut score = (nc / total).ln();
                for (a, &v) in x.values.iter().enumerate() {
                    if let Some(table) = &self.nominal[a] {
                        let row = &table[c];
                        let d = self.domain_sizes[a].max(row.len()) as f64;
                        let n = row.get(v as usize).copied().unwrap_or(0.0);
                        score += ((n + 1.0) / (nc + d)).ln();
                    } else if let Some(g) = &self.numeric[a] {
                        score += g[c].log_density(v);
                    }
                }
                score
            })
            .collect()
    }
}

/// Normalizes log scores into posterior probabilities.
pub(crate) fn posterior(log_scores: &[f64]) -> Vec<f64> {
    let max = log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return vec![1.0 / log_scores.len() as f64; log_scores.len()];
    }
    let exps: Vec<f64> = log_scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

#[derive(Debug, Clone, Default)]
pub struct NaiveBayesLearner;

#[derive(Debug, Clone)]
pub struct NaiveBayesModel {
    stats: NaiveBayesStats,
}

impl NaiveBayesModel {
    pub fn fit(ds: &Dataset) -> Self {
        NaiveBayesModel {
            stats: NaiveBayesStats::from_dataset(ds),
        }
    }

    pub fn stats(&self) -> &NaiveBayesStats {
        &self.stats
    }
}

impl BatchModel for NaiveBayesModel {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        posterior(&self.stats.log_scores(x))
    }

    fn predict(&self, x: &Instance) -> usize {
        argmax(&self.stats.log_scores(x))
    }
}

impl BatchLearner for NaiveBayesLearner {
    fn name(&self) -> &str {
        "nb"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>> {
        Ok(Box::new(NaiveBayesModel::fit(train)))
    }
}
