//! Cross-validated evaluation of the classification pipeline.

mod cv;
pub mod metrics;
mod report;

pub use cv::{
    ablation, cross_validate, feature_importance, kfold, train_on_fold, AblationRow, CategoryImportance,
    FeatureImportanceReport, FeatureWeight, FoldAssignment,
};
pub use report::{EvalOptions, EvalReport, LabelMetrics, VocabularyScope};
