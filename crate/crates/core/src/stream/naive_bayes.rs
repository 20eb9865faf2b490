use super::StreamModel;
use crate::batch::NaiveBayesStats;
use crate::dataset::{AttributeSchema, Instance};
use crate::argmax;

/// Naive Bayes with one-pass updates of the same statistics the batch
/// learner uses.
#[derive(Debug, Clone)]
pub struct StreamingNaiveBayes {
    stats: NaiveBayesStats,
}

impl StreamingNaiveBayes {
    pub fn new(schema: &AttributeSchema) -> Self {
        StreamingNaiveBayes {
            stats: NaiveBayesStats::new(schema),
        }
    }

    pub fn stats(&self) -> &NaiveBayesStats {
        &self.stats
    }
}

impl StreamModel for StreamingNaiveBayes {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        crate::batch::naive_bayes_posterior(&self.stats.log_scores(x))
    }

    fn predict(&self, x: &Instance) -> usize {
        argmax(&self.stats.log_scores(x))
    }

    fn learn(&mut self, x: &Instance) {
        self.stats.update(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, Dataset};
    use proptest::prelude::*;

    fn schema() -> AttributeSchema {
        AttributeSchema::new(
            vec![Attribute::nominal("p", ["a", "b", "c"]), Attribute::numeric("x")],
            vec!["n".into(), "y".into()],
        )
        .unwrap()
    }

    #[test]
    fn cold_start_predicts_class_zero() {
        let m = StreamingNaiveBayes::new(&schema());
        let x = Instance::new(vec![2.0, 5.0], 1);
        assert_eq!(m.predict(&x), 0);
        assert_eq!(m.predict_scores(&x), vec![0.5, 0.5]);
    }

    fn rel_close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300) || (a - b).abs() < 1e-12
    }

    proptest! {
        #[test]
        fn one_pass_stats_equal_batch_stats(rows in prop::collection::vec((0usize..3, -1e4f64..1e4, 0usize..2), 1..200)) {
            let instances: Vec<Instance> = rows.iter().map(|&(p, x, l)| Instance::new(vec![p as f64, x], l)).collect();
            let ds = Dataset::new(schema(), instances.clone(), vec![]).unwrap();
            let batch = NaiveBayesStats::from_dataset(&ds);
            let mut m = StreamingNaiveBayes::new(&schema());
            for x in &instances {
                m.learn(x);
            }
            let s = m.stats();
            prop_assert_eq!(s.class_counts(), batch.class_counts());
            for c in 0..2 {
                prop_assert_eq!(s.nominal_counts(0, c), batch.nominal_counts(0, c));
                let (g1, g2) = (s.gaussian(1, c).unwrap(), batch.gaussian(1, c).unwrap());
                prop_assert_eq!(g1.count(), g2.count());
                prop_assert!(rel_close(g1.mean(), g2.mean()), "{} vs {}", g1.mean(), g2.mean());
                prop_assert!(rel_close(g1.variance(), g2.variance()), "{} vs {}", g1.variance(), g2.variance());
            }
        }
    }
}
