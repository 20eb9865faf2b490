//! OneR attribute ranking: each attribute is scored by the training
//! accuracy of the best single-attribute rule built on it.

use crate::dataset::Dataset;
use crate::{argmax, Error, Result};

/// Minimum count of the majority class in a numeric bucket.
pub const DEFAULT_MIN_BUCKET: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct OneRScore {
    /// 1-based attribute index.
    pub attribute: usize,
    pub name: String,
    /// Training accuracy of the one-attribute rule.
    pub accuracy: f64,
}

pub fn oner_rank(ds: &Dataset) -> Result<Vec<OneRScore>> {
    oner_rank_with(ds, DEFAULT_MIN_BUCKET)
}

/// Ranks attributes by one-rule accuracy, descending; ties by ascending
/// attribute index.
pub fn oner_rank_with(ds: &Dataset, min_bucket: usize) -> Result<Vec<OneRScore>> {
    if ds.is_empty() {
        return Err(Error::Config("cannot rank attributes of an empty dataset".into()));
    }
    let n = ds.len() as f64;
    let mut scores: Vec<OneRScore> = (0..ds.schema().len())
        .map(|a| {
            let correct = if ds.schema().is_nominal(a) {
                nominal_rule_correct(ds, a)
            } else {
                numeric_rule_correct(ds, a, min_bucket.max(1))
            };
            OneRScore {
                attribute: a + 1,
                name: ds.schema().attribute(a).name.clone(),
                accuracy: correct as f64 / n,
            }
        })
        .collect();
    scores.sort_by(|x, y| y.accuracy.total_cmp(&x.accuracy).then(x.attribute.cmp(&y.attribute)));
    Ok(scores)
}

fn nominal_rule_correct(ds: &Dataset, attr: usize) -> usize {
    let k = ds.num_classes();
    let mut counts = vec![vec![0usize; k]; ds.schema().domain_len(attr)];
    for inst in ds.instances() {
        counts[inst.nominal(attr)][inst.label] += 1;
    }
    counts.iter().map(|c| c.iter().copied().max().unwrap_or(0)).sum()
}

fn majority(counts: &[usize]) -> usize {
    let as_f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    argmax(&as_f)
}

/// Greedy bucketing over the sorted values. A bucket closes at a value
/// boundary once its majority class has `min_bucket` members and the next
/// value's first instance belongs to another class; a short final bucket is
/// merged into its predecessor.
fn numeric_rule_correct(ds: &Dataset, attr: usize, min_bucket: usize) -> usize {
    let k = ds.num_classes();
    let mut pairs: Vec<(f64, usize)> = ds.instances().iter().map(|i| (i.values[attr], i.label)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut buckets: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; k];
    let mut i = 0;
    while i < pairs.len() {
        let v = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == v {
            current[pairs[i].1] += 1;
            i += 1;
        }
        let maj = majority(&current);
        if current[maj] >= min_bucket && (i == pairs.len() || pairs[i].1 != maj) {
            buckets.push(std::mem::replace(&mut current, vec![0; k]));
        }
    }
    if current.iter().any(|&c| c > 0) {
        match buckets.last_mut() {
            Some(last) => last.iter_mut().zip(&current).for_each(|(a, b)| *a += b),
            None => buckets.push(current),
        }
    }

    // Adjacent buckets with the same majority collapse into one interval;
    // the summed majority is unchanged, so only the rule size shrinks.
    let mut merged: Vec<Vec<usize>> = Vec::new();
    for b in buckets {
        match merged.last_mut() {
            Some(prev) if majority(prev) == majority(&b) => prev.iter_mut().zip(&b).for_each(|(a, x)| *a += x),
            _ => merged.push(b),
        }
    }
    merged.iter().map(|b| b[majority(b)]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema, Instance};

    fn dataset(attrs: Vec<Attribute>, rows: &[(&[f64], usize)], classes: usize) -> Dataset {
        let labels = (0..classes).map(|c| format!("c{c}")).collect();
        let schema = AttributeSchema::new(attrs, labels).unwrap();
        let instances = rows.iter().map(|(v, l)| Instance::new(v.to_vec(), *l)).collect();
        Dataset::new(schema, instances, vec![]).unwrap()
    }

    /// Best rule over all class assignments to the attribute's values.
    fn brute_force_nominal(ds: &Dataset, attr: usize) -> usize {
        let d = ds.schema().domain_len(attr);
        let k = ds.num_classes();
        let mut best = 0;
        for code in 0..k.pow(d as u32) {
            let rule: Vec<usize> = (0..d).map(|v| (code / k.pow(v as u32)) % k).collect();
            let correct = ds.instances().iter().filter(|i| rule[i.nominal(attr)] == i.label).count();
            best = best.max(correct);
        }
        best
    }

    #[test]
    fn toy_ranking_matches_exhaustive_rules() {
        let attrs = vec![
            Attribute::nominal("a", ["x", "y", "z"]),
            Attribute::nominal("b", ["p", "q"]),
        ];
        let rows: [(&[f64], usize); 8] = [
            (&[0.0, 0.0], 0),
            (&[0.0, 1.0], 0),
            (&[1.0, 0.0], 1),
            (&[1.0, 1.0], 1),
            (&[2.0, 0.0], 0),
            (&[2.0, 1.0], 1),
            (&[0.0, 0.0], 0),
            (&[1.0, 1.0], 0),
        ];
        let ds = dataset(attrs, &rows, 2);
        let oracle: Vec<f64> = (0..2).map(|a| brute_force_nominal(&ds, a) as f64 / 8.0).collect();
        assert_eq!(oracle, vec![6.0 / 8.0, 5.0 / 8.0]);
        let ranking = oner_rank(&ds).unwrap();
        assert_eq!(ranking[0].attribute, 1);
        assert_eq!(ranking[0].accuracy, oracle[0]);
        assert_eq!(ranking[1].attribute, 2);
        assert_eq!(ranking[1].accuracy, oracle[1]);
    }

    #[test]
    fn perfect_predictor_ranks_first() {
        let attrs = vec![Attribute::numeric("noise"), Attribute::nominal("key", ["a", "b"])];
        let rows: Vec<(Vec<f64>, usize)> = (0..20).map(|i| (vec![(i * 7 % 5) as f64, (i % 2) as f64], i % 2)).collect();
        let rows: Vec<(&[f64], usize)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let ds = dataset(attrs, &rows, 2);
        let ranking = oner_rank(&ds).unwrap();
        assert_eq!(ranking[0].attribute, 2);
        assert_eq!(ranking[0].accuracy, 1.0);
    }

    #[test]
    fn constant_attribute_scores_majority_frequency() {
        let rows: [(&[f64], usize); 5] = [(&[1.0], 0), (&[1.0], 1), (&[1.0], 1), (&[1.0], 1), (&[1.0], 0)];
        let ds = dataset(vec![Attribute::numeric("c")], &rows, 2);
        assert_eq!(oner_rank(&ds).unwrap()[0].accuracy, 0.6);
    }

    #[test]
    fn numeric_buckets_need_min_majority() {
        // 12 sorted values: six of class 0 then six of class 1 split cleanly.
        let rows: Vec<(Vec<f64>, usize)> = (0..12).map(|i| (vec![i as f64], usize::from(i >= 6))).collect();
        let rows_ref: Vec<(&[f64], usize)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let ds = dataset(vec![Attribute::numeric("x")], &rows_ref, 2);
        assert_eq!(oner_rank(&ds).unwrap()[0].accuracy, 1.0);
        // With a larger minimum the whole range is one bucket.
        assert_eq!(oner_rank_with(&ds, 7).unwrap()[0].accuracy, 0.5);
    }

    #[test]
    fn ties_break_by_ascending_index() {
        let rows: [(&[f64], usize); 2] = [(&[1.0, 1.0], 0), (&[1.0, 1.0], 0)];
        let ds = dataset(vec![Attribute::numeric("a"), Attribute::numeric("b")], &rows, 1);
        let r = oner_rank(&ds).unwrap();
        assert_eq!((r[0].attribute, r[1].attribute), (1, 2));
    }

    #[test]
    fn empty_dataset_is_error() {
        let ds = dataset(vec![Attribute::numeric("a")], &[], 1);
        assert!(oner_rank(&ds).is_err());
    }
}
