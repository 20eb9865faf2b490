//! Class relabeling, attribute selection and feature scaling.

mod normalize;
mod onehot;
mod oner;
mod select;
mod variant;

pub use normalize::{fit_normalizer, Normalizer};
pub use onehot::{one_hot_encode, OneHotEncoder};
pub use oner::{oner_rank, oner_rank_with, OneRScore, DEFAULT_MIN_BUCKET};
pub use select::{select_attributes, SelectionSpec, DEFAULT_SELECTION};
pub use variant::{apply_variant, AttackCategory, AttackCategoryMap, PreprocessVariant};
