//! Batch and stream classifier benchmark for KDD99-family intrusion
//! detection data.
//!
//! The crate is organised around the pipeline stages:
//!
//! - [`dataset`]: the 41-attribute connection-record schema, parsing of the
//!   raw comma-separated distribution files and digest-checked download.
//! - [`preprocess`]: class relabeling variants, attribute selection, OneR
//!   attribute ranking, min-max normalization and one-hot encoding.
//! - [`batch`]: Naive Bayes, a C4.5-style decision tree, k-NN, a multilayer
//!   perceptron and a linear SMO support vector machine.
//! - [`stream`]: Hoeffding tree, streaming Naive Bayes, sliding-window k-NN
//!   and OzaBoost, all driven predict-then-learn.
//! - [`eval`]: stratified cross-validation, prequential evaluation with a
//!   fading factor, confusion matrices and drift annotation.
//!
//! Data-parallel work (cross-validation folds, batch prediction) goes through
//! [`exec::Execution`], which uses rayon when the `parallel` feature is on and
//! falls back to plain iteration otherwise.

// `!(x > 0.0)` guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod dataset;
mod error;
pub mod eval;
pub mod exec;
pub mod preprocess;
pub mod stats;
pub mod stream;

pub use error::{Error, Result};
pub use exec::Execution;

/// Index of the largest score. Ties go to the lowest index; an empty slice
/// or an all-NaN slice yields 0.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, &s) in scores.iter().enumerate() {
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::argmax;

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(argmax(&[0.5, 0.5, 0.1]), 0);
        assert_eq!(argmax(&[0.1, 0.7, 0.7]), 1);
        assert_eq!(argmax(&[]), 0);
        assert_eq!(argmax(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), 0);
    }
}
