use super::{BatchLearner, BatchModel};
use crate::dataset::{Dataset, Instance};
use crate::preprocess::{fit_normalizer, Normalizer, OneHotEncoder};
use crate::Result;

/// Feature preparation fitted on each training set before the wrapped
/// learner sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeaturePrep {
    /// Raw attributes (tree, Naive Bayes).
    #[default]
    Raw,
    /// Min-max scaled numeric attributes, nominal kept (k-NN).
    Normalize,
    /// Min-max scaling then one-hot encoding (MLP, SVM).
    NormalizeOneHot,
}

/// Wraps a learner so that the normalizer and encoder are fitted on the
/// training data only and replayed on every instance at prediction time.
pub struct Preprocessed<L> {
    prep: FeaturePrep,
    inner: L,
}

impl<L: BatchLearner> Preprocessed<L> {
    pub fn new(prep: FeaturePrep, inner: L) -> Self {
        Preprocessed { prep, inner }
    }
}

struct PreprocessedModel {
    normalizer: Option<Normalizer>,
    encoder: Option<OneHotEncoder>,
    model: Box<dyn BatchModel>,
}

impl PreprocessedModel {
    fn transform(&self, x: &Instance) -> Instance {
        let x = match &self.normalizer {
            Some(n) => n.transform_instance(x),
            None => x.clone(),
        };
        match &self.encoder {
            Some(e) => e.encode_instance(&x),
            None => x,
        }
    }
}

impl BatchModel for PreprocessedModel {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        self.model.predict_scores(&self.transform(x))
    }

    fn predict(&self, x: &Instance) -> usize {
        self.model.predict(&self.transform(x))
    }
}

impl<L: BatchLearner> BatchLearner for Preprocessed<L> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>> {
        if self.prep == FeaturePrep::Raw {
            return self.inner.fit(train);
        }
        let normalizer = fit_normalizer(train);
        let mut data = normalizer.apply(train)?;
        let encoder = match self.prep {
            FeaturePrep::NormalizeOneHot => {
                let e = OneHotEncoder::fit(&data);
                data = e.encode(&data)?;
                Some(e)
            }
            _ => None,
        };
        let model = self.inner.fit(&data)?;
        Ok(Box::new(PreprocessedModel {
            normalizer: Some(normalizer),
            encoder,
            model,
        }))
    }
}
