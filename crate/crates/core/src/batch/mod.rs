//! Batch classifiers: fit once on a training set, then predict.

mod knn;
mod mlp;
mod naive_bayes;
mod prep;
mod svm;
mod tree;

pub use knn::{knn_distance, KnnConfig, KnnLearner, KnnModel};
pub(crate) use knn::{nearest as knn_nearest, vote as knn_vote};
pub(crate) use naive_bayes::posterior as naive_bayes_posterior;
pub use mlp::{Mlp, MlpConfig, MlpLearner};
pub use naive_bayes::{NaiveBayesLearner, NaiveBayesModel, NaiveBayesStats};
pub use prep::{FeaturePrep, Preprocessed};
pub use svm::{LinearSvm, SvmConfig, SvmLearner};
pub use tree::{DecisionTree, Pruning, TreeConfig, TreeLearner, TreeNode};

use crate::dataset::{Dataset, Instance};
use crate::{argmax, Result};

/// A trained classifier. Read-only after fitting, so it can be queried from
/// many threads at once.
pub trait BatchModel: Send + Sync {
    /// One score per class; larger is more likely.
    fn predict_scores(&self, x: &Instance) -> Vec<f64>;

    /// Class index of the highest score, lowest index on ties.
    fn predict(&self, x: &Instance) -> usize {
        argmax(&self.predict_scores(x))
    }
}

/// Builds a fresh [`BatchModel`] from a training set.
pub trait BatchLearner: Send + Sync {
    fn name(&self) -> &str;

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>>;
}

/// Fits on `train` and predicts every instance of `test`.
pub fn fit_predict(learner: &dyn BatchLearner, train: &Dataset, test: &[Instance]) -> Result<Vec<usize>> {
    let model = learner.fit(train)?;
    Ok(test.iter().map(|x| model.predict(x)).collect())
}
