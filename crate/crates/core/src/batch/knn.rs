//! Brute-force k-nearest-neighbours over normalized attributes.

use super::{BatchLearner, BatchModel};
use crate::dataset::{Dataset, Instance};
use crate::eval::stratified_subsample;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnnConfig {
    pub k: usize,
    /// Stratified subsample of the training set, for runtime.
    pub train_sample: Option<usize>,
    pub seed: u64,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 3,
            train_sample: None,
            seed: 1,
        }
    }
}

/// Euclidean distance over numeric attributes plus one per nominal mismatch.
pub fn knn_distance(nominal: &[bool], a: &[f64], b: &[f64]) -> f64 {
    let mut sq = 0.0;
    let mut mismatches = 0.0;
    for ((&is_nom, &x), &y) in nominal.iter().zip(a).zip(b) {
        if is_nom {
            if x != y {
                mismatches += 1.0;
            }
        } else {
            let d = x - y;
            sq += d * d;
        }
    }
    sq.sqrt() + mismatches
}

/// The `k` nearest `(distance, index)` pairs in ascending order; equal
/// distances keep the lower index first.
pub(crate) fn nearest<'a, I>(nominal: &[bool], query: &[f64], candidates: I, k: usize) -> Vec<(f64, usize)>
where
    I: IntoIterator<Item = (usize, &'a [f64])>,
{
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for (idx, values) in candidates {
        let d = knn_distance(nominal, query, values);
        if best.len() == k && d >= best[k - 1].0 {
            continue;
        }
        let pos = best.partition_point(|&(bd, _)| bd <= d);
        best.insert(pos, (d, idx));
        best.truncate(k);
    }
    best
}

/// Majority vote; ties go to the class with the smaller summed distance,
/// then to the lower class index.
pub(crate) fn vote(neighbours: &[(f64, usize)], label_of: impl Fn(usize) -> usize, num_classes: usize) -> usize {
    let mut votes = vec![0usize; num_classes];
    let mut dist = vec![0.0; num_classes];
    for &(d, idx) in neighbours {
        let c = label_of(idx);
        votes[c] += 1;
        dist[c] += d;
    }
    let mut best = 0;
    for c in 1..num_classes {
        if votes[c] > votes[best] || (votes[c] == votes[best] && dist[c] < dist[best]) {
            best = c;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct KnnModel {
    k: usize,
    nominal: Vec<bool>,
    num_classes: usize,
    instances: Vec<Instance>,
}

impl KnnModel {
    pub fn fit(train: &Dataset, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if k > train.len() {
            return Err(Error::Config(format!("k = {k} exceeds training size {}", train.len())));
        }
        let schema = train.schema();
        Ok(KnnModel {
            k,
            nominal: (0..schema.len()).map(|i| schema.is_nominal(i)).collect(),
            num_classes: train.num_classes(),
            instances: train.instances().to_vec(),
        })
    }

    pub fn neighbours(&self, x: &Instance) -> Vec<(f64, usize)> {
        let candidates = self.instances.iter().enumerate().map(|(i, t)| (i, t.values.as_slice()));
        nearest(&self.nominal, &x.values, candidates, self.k)
    }
}

impl BatchModel for KnnModel {
    /// Vote fractions among the `k` neighbours.
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let mut scores = vec![0.0; self.num_classes];
        for (_, idx) in self.neighbours(x) {
            scores[self.instances[idx].label] += 1.0 / self.k as f64;
        }
        scores
    }

    fn predict(&self, x: &Instance) -> usize {
        vote(&self.neighbours(x), |i| self.instances[i].label, self.num_classes)
    }
}

#[derive(Debug, Clone, Default)]
pub struct KnnLearner {
    pub config: KnnConfig,
}

impl BatchLearner for KnnLearner {
    fn name(&self) -> &str {
        "knn"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>> {
        let model = match self.config.train_sample {
            Some(n) if n < train.len() => {
                let idx = stratified_subsample(train, n, self.config.seed);
                KnnModel::fit(&train.subset(&idx), self.config.k)?
            }
            _ => KnnModel::fit(train, self.config.k)?,
        };
        Ok(Box::new(model))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema};
    use proptest::prelude::*;

    fn numeric_ds(rows: &[(&[f64], usize)], classes: usize) -> Dataset {
        let dims = rows[0].0.len();
        let schema = AttributeSchema::new(
            (0..dims).map(|i| Attribute::numeric(format!("x{i}"))).collect(),
            (0..classes).map(|c| format!("c{c}")).collect(),
        )
        .unwrap();
        let inst = rows.iter().map(|(v, l)| Instance::new(v.to_vec(), *l)).collect();
        Dataset::new(schema, inst, vec![]).unwrap()
    }

    #[test]
    fn distance_mixes_euclidean_and_overlap() {
        let nominal = [false, true, false];
        assert_eq!(knn_distance(&nominal, &[0.0, 1.0, 0.0], &[0.3, 2.0, 0.4]), 0.5 + 1.0);
        assert_eq!(knn_distance(&nominal, &[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0]), 0.0);
    }

    #[test]
    fn k1_exact_match_returns_its_label() {
        let ds = numeric_ds(&[(&[0.1, 0.1], 0), (&[0.5, 0.9], 1), (&[0.9, 0.2], 2)], 3);
        let m = KnnModel::fit(&ds, 1).unwrap();
        for x in ds.instances() {
            assert_eq!(m.predict(x), x.label);
        }
    }

    #[test]
    fn three_point_set_against_distance_table() {
        let pts: [(&[f64], usize); 3] = [(&[0.0, 0.0], 0), (&[1.0, 0.0], 1), (&[0.0, 2.0], 1)];
        let ds = numeric_ds(&pts, 2);
        let q = Instance::new(vec![0.2, 0.1], 0);
        // Hand table: d0 = sqrt(0.05), d1 = sqrt(0.65), d2 = sqrt(3.65).
        let table: Vec<f64> = pts
            .iter()
            .map(|(p, _)| ((p[0] - 0.2f64).powi(2) + (p[1] - 0.1f64).powi(2)).sqrt())
            .collect();
        let m = KnnModel::fit(&ds, 3).unwrap();
        let n = m.neighbours(&q);
        assert_eq!(n.iter().map(|p| p.1).collect::<Vec<_>>(), vec![0, 1, 2]);
        for (d, i) in n {
            assert!((d - table[i]).abs() < 1e-12);
        }
        // Two of three neighbours are class 1.
        assert_eq!(m.predict(&q), 1);
        let m1 = KnnModel::fit(&ds, 1).unwrap();
        assert_eq!(m1.predict(&q), 0);
    }

    #[test]
    fn vote_tie_goes_to_closer_class_then_lower_index() {
        assert_eq!(vote(&[(0.4, 0), (0.1, 1)], |i| i, 2), 1);
        assert_eq!(vote(&[(0.2, 0), (0.2, 1)], |i| i, 2), 0);
    }

    #[test]
    fn neighbour_distance_tie_keeps_lower_index() {
        let ds = numeric_ds(&[(&[1.0], 1), (&[-1.0], 0), (&[1.0], 0)], 2);
        let m = KnnModel::fit(&ds, 1).unwrap();
        assert_eq!(m.neighbours(&Instance::new(vec![0.0], 0)), vec![(1.0, 0)]);
    }

    #[test]
    fn k_larger_than_training_set_is_an_error() {
        let ds = numeric_ds(&[(&[0.0], 0), (&[1.0], 1)], 2);
        assert!(KnnModel::fit(&ds, 3).is_err());
    }

    proptest! {
        #[test]
        fn k_equal_n_predicts_majority(labels in prop::collection::vec(0usize..3, 1..30), q in -2.0f64..2.0) {
            let rows: Vec<(Vec<f64>, usize)> = labels.iter().enumerate().map(|(i, &l)| (vec![i as f64 * 0.1], l)).collect();
            let refs: Vec<(&[f64], usize)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
            let ds = numeric_ds(&refs, 3);
            let m = KnnModel::fit(&ds, ds.len()).unwrap();
            let counts = ds.class_counts();
            let max = *counts.iter().max().unwrap();
            let p = m.predict(&Instance::new(vec![q], 0));
            prop_assert_eq!(counts[p], max);
        }
    }
}
