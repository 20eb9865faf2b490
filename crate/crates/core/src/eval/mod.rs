//! Cross-validation, prequential evaluation, metrics and drift annotation.

mod cv;
mod drift;
mod folds;
mod metrics;
mod prequential;

pub use cv::{cross_validate, CvResult};
pub use drift::{annotate_drifts, gen_drift_stream, DEFAULT_DROP_THRESHOLD, DEFAULT_DRIFT_WINDOW};
pub use folds::{stratified_folds, stratified_subsample, FoldPlan};
pub use metrics::{ConfusionMatrix, Metrics};
pub use prequential::{faded_update, prequential_run, PrequentialRecord, PrequentialTrace};
