use super::folds::stratified_folds;
use super::metrics::ConfusionMatrix;
use crate::batch::BatchLearner;
use crate::dataset::Dataset;
use crate::{Execution, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub error: f64,
    pub fold_accuracies: Vec<f64>,
}

/// Stratified `folds`-fold cross-validation. `factory` is called once per
/// fold and the learner only ever sees that fold's training instances, so
/// any preprocessing it fits is leakage-free. Folds (and the predictions
/// within each fold) run under `exec`; results do not depend on it.
pub fn cross_validate<F>(ds: &Dataset, factory: F, folds: usize, seed: u64, exec: Execution) -> Result<CvResult>
where
    F: Fn() -> Result<Box<dyn BatchLearner>> + Sync + Send,
{
    let plan = stratified_folds(ds, folds, seed)?;
    let labels = ds.schema().class_labels();
    let per_fold: Vec<Result<ConfusionMatrix>> = exec.map_range(folds, |f| {
        let learner = factory()?;
        let train = ds.subset(&plan.train_indices(f));
        let model = learner.fit(&train)?;
        drop(train);
        let test = plan.test_indices(f);
        let predictions = exec.map_slice(&test, |&i| model.predict(ds.instance(i)));
        let mut cm = ConfusionMatrix::new(labels);
        for (&i, p) in test.iter().zip(predictions) {
            cm.add(ds.instance(i).label, p);
        }
        Ok(cm)
    });
    let mut confusion = ConfusionMatrix::new(labels);
    let mut fold_accuracies = Vec::with_capacity(folds);
    for cm in per_fold {
        let cm = cm?;
        fold_accuracies.push(cm.accuracy());
        confusion.merge(&cm);
    }
    let accuracy = confusion.accuracy();
    Ok(CvResult {
        confusion,
        accuracy,
        error: 1.0 - accuracy,
        fold_accuracies,
    })
}
