//! Metric summaries of pooled predictions and their text renderings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{
    binarize, cohen_kappa, label_weights, mcc, prf, roc_auc, weighted_mean, weighted_mean_present, Confusion,
};
use crate::category::Category;
use crate::classifier::{Prediction, TrainConfig};
use crate::error::Result;
use crate::scalar::Scalar;

/// How the TF-IDF vocabulary is fitted during cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VocabularyScope {
    /// On the training folds only.
    #[default]
    PerFold,
    /// Once on the whole corpus, including held-out folds.
    WholeCorpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub folds: usize,
    /// Seed of the fold assignment.
    pub seed: u64,
    pub vocabulary: VocabularyScope,
    /// Divide the weighted F1 by the number of labels.
    pub literal_f1_formula: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { folds: 10, seed: 0, vocabulary: VocabularyScope::PerFold, literal_f1_formula: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LabelMetrics<T> {
    pub category: Category,
    /// Number of instances carrying the label.
    pub support: usize,
    pub weight: T,
    pub precision: T,
    pub recall: T,
    pub f1: T,
    pub kappa: T,
    pub mcc: T,
    /// Absent when the label has a single class in the evaluated data.
    pub auc: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EvalReport<T> {
    pub config: TrainConfig,
    pub options: EvalOptions,
    pub instances: usize,
    pub per_label: Vec<LabelMetrics<T>>,
    pub weighted_precision: T,
    pub weighted_recall: T,
    pub weighted_f1: T,
    pub weighted_kappa: T,
    pub weighted_mcc: T,
    pub weighted_auc: Option<T>,
}

impl<T: Scalar> EvalReport<T> {
    /// Scores pooled predictions against the true category sets.
    pub fn from_predictions(
        truth: &[BTreeSet<Category>],
        predictions: &[Prediction<T>],
        config: TrainConfig,
        options: EvalOptions,
    ) -> Result<Self> {
        let predicted: Vec<BTreeSet<Category>> = predictions.iter().map(|p| p.labels.clone()).collect();
        let weights: Vec<T> = label_weights(truth, &Category::ALL);
        let mut per_label = Vec::with_capacity(Category::COUNT);
        for (&c, &weight) in Category::ALL.iter().zip(&weights) {
            let t = binarize(truth, &c);
            let confusion = Confusion::from_binary(&t, &binarize(&predicted, &c))?;
            let scores: Vec<T> = predictions.iter().map(|p| p.score(c)).collect();
            let auc = roc_auc(&t, &scores)?;
            if auc.is_none() && weight > T::zero() {
                log::warn!("AUC undefined for {c}: only one class present; excluded from the weighted AUC");
            }
            let m = prf::<T>(&confusion);
            per_label.push(LabelMetrics {
                category: c,
                support: confusion.tp + confusion.fn_,
                weight,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
                kappa: cohen_kappa(&confusion),
                mcc: mcc(&confusion),
                auc,
            });
        }
        let column = |f: fn(&LabelMetrics<T>) -> T| per_label.iter().map(f).collect::<Vec<T>>();
        let literal = options.literal_f1_formula;
        Ok(EvalReport {
            config,
            options,
            instances: truth.len(),
            weighted_precision: weighted_mean(&column(|m| m.precision), &weights, false),
            weighted_recall: weighted_mean(&column(|m| m.recall), &weights, false),
            weighted_f1: weighted_mean(&column(|m| m.f1), &weights, literal),
            weighted_kappa: weighted_mean(&column(|m| m.kappa), &weights, false),
            weighted_mcc: weighted_mean(&column(|m| m.mcc), &weights, false),
            weighted_auc: weighted_mean_present(&per_label.iter().map(|m| m.auc).collect::<Vec<_>>(), &weights),
            per_label,
        })
    }

    pub fn label(&self, category: Category) -> &LabelMetrics<T> {
        &self.per_label[category.index()]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let f = |v: T| format!("{:.3}", v.to_f64_lossy());
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>6} {:>9} {:>6} {:>6} {:>6} {:>6} {:>6}",
            "category", "support", "weight", "precision", "recall", "f1", "kappa", "mcc", "auc"
        );
        for m in &self.per_label {
            let _ = writeln!(
                out,
                "{:<14} {:>7} {:>6} {:>9} {:>6} {:>6} {:>6} {:>6} {:>6}",
                m.category.name(),
                m.support,
                f(m.weight),
                f(m.precision),
                f(m.recall),
                f(m.f1),
                f(m.kappa),
                f(m.mcc),
                m.auc.map_or("-".into(), f)
            );
        }
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>6} {:>9} {:>6} {:>6} {:>6} {:>6} {:>6}",
            "weighted",
            self.instances,
            "",
            f(self.weighted_precision),
            f(self.weighted_recall),
            f(self.weighted_f1),
            f(self.weighted_kappa),
            f(self.weighted_mcc),
            self.weighted_auc.map_or("-".into(), f)
        );
        out
    }
}
