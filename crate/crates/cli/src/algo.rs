use nidsbench::batch::{
    BatchLearner, FeaturePrep, KnnConfig, KnnLearner, MlpConfig, MlpLearner, NaiveBayesLearner, Preprocessed,
    SvmConfig, SvmLearner, TreeLearner,
};
use nidsbench::dataset::{Dataset, Instance};
use nidsbench::preprocess::Normalizer;
use nidsbench::stream::{
    HoeffdingConfig, HoeffdingTree, OzaBoost, OzaBoostConfig, StreamModel, StreamingNaiveBayes, WindowKnn,
    WindowKnnConfig,
};
use nidsbench::{Error, Result};
use serde_json::{json, Value};

use crate::config::{Algorithm, RunConfig};

/// A fresh batch learner, wrapped with the feature preparation it expects.
pub fn batch_learner(alg: Algorithm, cfg: &RunConfig) -> Result<Box<dyn BatchLearner>> {
    Ok(match alg {
        Algorithm::Nb => Box::new(NaiveBayesLearner),
        Algorithm::J48 => Box::new(TreeLearner::default()),
        Algorithm::Knn => Box::new(Preprocessed::new(
            FeaturePrep::Normalize,
            KnnLearner {
                config: KnnConfig {
                    k: cfg.k,
                    train_sample: cfg.sample,
                    seed: cfg.seed,
                },
            },
        )),
        Algorithm::Mlp => Box::new(Preprocessed::new(
            FeaturePrep::NormalizeOneHot,
            MlpLearner {
                config: MlpConfig {
                    epochs: cfg.epochs,
                    seed: cfg.seed,
                    ..MlpConfig::default()
                },
            },
        )),
        Algorithm::Svm => Box::new(Preprocessed::new(
            FeaturePrep::NormalizeOneHot,
            SvmLearner {
                config: SvmConfig {
                    seed: cfg.seed,
                    ..SvmConfig::default()
                },
            },
        )),
        other => return Err(Error::Config(format!("{other} is a stream algorithm; use the stream command"))),
    })
}

/// A fresh stream model for `data`'s schema.
pub fn stream_model(alg: Algorithm, data: &Dataset, cfg: &RunConfig) -> Result<Box<dyn StreamModel>> {
    let schema = data.schema();
    Ok(match alg {
        Algorithm::Snb => Box::new(StreamingNaiveBayes::new(schema)),
        Algorithm::Ht => Box::new(HoeffdingTree::new(schema, HoeffdingConfig::default())?),
        Algorithm::Wknn => Box::new(WindowKnn::new(
            schema,
            WindowKnnConfig {
                window_size: cfg.window,
                k: cfg.k,
            },
        )?),
        Algorithm::Ozaboost => Box::new(OzaBoost::new(
            schema.num_classes(),
            &OzaBoostConfig {
                members: cfg.ensemble_size,
                seed: cfg.seed,
            },
            || Ok(Box::new(HoeffdingTree::new(schema, HoeffdingConfig::default())?) as Box<dyn StreamModel>),
        )?),
        other => return Err(Error::Config(format!("{other} is a batch algorithm; use the batch command"))),
    })
}

/// The instance sequence a stream algorithm sees. Window k-NN gets min-max
/// scaling fitted on the first `warmup` instances; the others see raw data.
pub fn stream_input(alg: Algorithm, data: &Dataset, cfg: &RunConfig) -> Vec<Instance> {
    if alg != Algorithm::Wknn {
        return data.instances().to_vec();
    }
    let warm = &data.instances()[..cfg.warmup.min(data.len())];
    let norm = Normalizer::fit_instances(data.schema(), warm);
    data.instances().iter().map(|x| norm.transform_instance(x)).collect()
}

/// Hyperparameters recorded in the summary for `alg`.
pub fn params(alg: Algorithm, cfg: &RunConfig) -> Value {
    let m = MlpConfig::default();
    let s = SvmConfig::default();
    let h = HoeffdingConfig::default();
    let t = nidsbench::batch::TreeConfig::default();
    match alg {
        Algorithm::Nb => json!({"folds": cfg.folds, "seed": cfg.seed, "variance_floor": nidsbench::stats::VARIANCE_FLOOR}),
        Algorithm::J48 => json!({
            "folds": cfg.folds,
            "seed": cfg.seed,
            "min_leaf_instances": t.min_leaf_instances,
            "pruning_confidence": 0.25,
        }),
        Algorithm::Knn => json!({"folds": cfg.folds, "seed": cfg.seed, "k": cfg.k, "train_sample": cfg.sample}),
        Algorithm::Mlp => json!({
            "folds": cfg.folds,
            "seed": cfg.seed,
            "learning_rate": m.learning_rate,
            "momentum": m.momentum,
            "epochs": cfg.epochs,
            "sigmoid_slope": m.sigmoid_slope,
        }),
        Algorithm::Svm => json!({
            "folds": cfg.folds,
            "seed": cfg.seed,
            "c": s.c,
            "tolerance": s.tolerance,
            "max_passes": s.max_passes,
            "kernel": "linear",
        }),
        Algorithm::Snb => json!({"alpha": cfg.alpha}),
        Algorithm::Ht => json!({
            "alpha": cfg.alpha,
            "delta": h.delta,
            "grace_period": h.grace_period,
            "tie_threshold": h.tie_threshold,
        }),
        Algorithm::Wknn => json!({"alpha": cfg.alpha, "k": cfg.k, "window": cfg.window, "warmup": cfg.warmup}),
        Algorithm::Ozaboost => json!({
            "alpha": cfg.alpha,
            "members": cfg.ensemble_size,
            "seed": cfg.seed,
            "base": "ht",
            "poisson_cap": nidsbench::stream::MAX_POISSON,
        }),
    }
}
