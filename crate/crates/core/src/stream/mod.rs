//! Stream classifiers: each instance is predicted first, then learned.

mod hoeffding;
mod naive_bayes;
mod ozaboost;
mod window_knn;

pub use hoeffding::{hoeffding_bound, should_split, HoeffdingConfig, HoeffdingTree, LeafPrediction};
pub use naive_bayes::StreamingNaiveBayes;
pub use ozaboost::{poisson, BoostMember, OzaBoost, OzaBoostConfig, MAX_POISSON};
pub use window_knn::{WindowKnn, WindowKnnConfig};

use crate::argmax;
use crate::dataset::Instance;

/// An incrementally trained classifier. `predict_scores` takes `&self`, so
/// prediction can never change the model.
pub trait StreamModel: Send {
    /// One score per class; all equal before any learning.
    fn predict_scores(&self, x: &Instance) -> Vec<f64>;

    /// Class index of the highest score, lowest index on ties.
    fn predict(&self, x: &Instance) -> usize {
        argmax(&self.predict_scores(x))
    }

    fn learn(&mut self, x: &Instance);
}

impl<M: StreamModel + ?Sized> StreamModel for Box<M> {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        (**self).predict_scores(x)
    }

    fn predict(&self, x: &Instance) -> usize {
        (**self).predict(x)
    }

    fn learn(&mut self, x: &Instance) {
        (**self).learn(x)
    }
}
