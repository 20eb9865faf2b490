use std::fmt::Write as _;

use super::metrics::ConfusionMatrix;
use crate::dataset::Instance;
use crate::stream::StreamModel;
use crate::{Error, Result};

/// One step of the fading-factor recurrence: `S' = a + αS`, `B' = 1 + αB`.
/// Returns `(S', B', S'/B')`.
pub fn faded_update(s: f64, b: f64, correct: bool, alpha: f64) -> (f64, f64, f64) {
    let a = if correct { 1.0 } else { 0.0 };
    let s = a + alpha * s;
    let b = 1.0 + alpha * b;
    (s, b, s / b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrequentialRecord {
    /// 1-based position in the stream.
    pub index: usize,
    pub correct: bool,
    pub faded_accuracy: f64,
    pub cumulative_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrequentialTrace {
    pub alpha: f64,
    pub records: Vec<PrequentialRecord>,
    pub confusion: ConfusionMatrix,
}

impl PrequentialTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Accuracy over the whole stream.
    pub fn cumulative_accuracy(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.cumulative_accuracy)
    }

    /// Mean of the faded accuracy curve.
    pub fn mean_faded_accuracy(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.faded_accuracy).sum::<f64>() / self.records.len() as f64
    }

    pub fn faded_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.faded_accuracy).collect()
    }

    /// Recomputes the faded series from the recorded outcomes.
    pub fn replay(&self) -> Vec<f64> {
        let (mut s, mut b) = (0.0, 0.0);
        self.records
            .iter()
            .map(|r| {
                let (s2, b2, acc) = faded_update(s, b, r.correct, self.alpha);
                s = s2;
                b = b2;
                acc
            })
            .collect()
    }

    /// CSV `index,correct,faded_accuracy,cumulative_accuracy`, keeping every
    /// `step`-th record and always the last one.
    pub fn to_csv(&self, step: usize) -> String {
        let step = step.max(1);
        let mut out = String::from("index,correct,faded_accuracy,cumulative_accuracy\n");
        let n = self.records.len();
        for (i, r) in self.records.iter().enumerate() {
            if (i + 1) % step == 0 || i + 1 == n {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.index,
                    u8::from(r.correct),
                    r.faded_accuracy,
                    r.cumulative_accuracy
                );
            }
        }
        out
    }
}

/// Predicts each instance, records the outcome, then learns it.
pub fn prequential_run<M: StreamModel + ?Sized>(
    stream: &[Instance],
    model: &mut M,
    alpha: f64,
    labels: &[String],
) -> Result<PrequentialTrace> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Config(format!("fading factor {alpha} outside (0, 1]")));
    }
    let mut confusion = ConfusionMatrix::new(labels);
    let mut records = Vec::with_capacity(stream.len());
    let (mut s, mut b) = (0.0, 0.0);
    let mut correct_total = 0usize;
    for (i, x) in stream.iter().enumerate() {
        let predicted = model.predict(x);
        if predicted >= labels.len() || x.label >= labels.len() {
            return Err(Error::Training(format!(
                "class index out of range at instance {}: predicted {predicted}, actual {}",
                i + 1,
                x.label
            )));
        }
        let correct = predicted == x.label;
        confusion.add(x.label, predicted);
        let (s2, b2, faded) = faded_update(s, b, correct, alpha);
        s = s2;
        b = b2;
        correct_total += usize::from(correct);
        records.push(PrequentialRecord {
            index: i + 1,
            correct,
            faded_accuracy: faded,
            cumulative_accuracy: correct_total as f64 / (i + 1) as f64,
        });
        model.learn(x);
    }
    Ok(PrequentialTrace {
        alpha,
        records,
        confusion,
    })
}
