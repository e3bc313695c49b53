//! k-fold cross-validation, feature-set ablation and SVM weight ranking.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{EvalOptions, EvalReport, VocabularyScope};
use crate::category::Category;
use crate::classifier::{Algorithm, Prediction, PreparedCorpus, TrainConfig, TrainedModel};
use crate::error::{Error, Result};
use crate::features::{FeatureExtractor, FeatureSet, Vocabulary};
use crate::rng::SeededRng;
use crate::scalar::Scalar;

/// Fold index of every instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub seed: u64,
    pub fold_of: Vec<usize>,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.fold_of {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles `0..n` with the seed and cuts the result into `k` contiguous
/// chunks; the first `n % k` chunks get one extra instance.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {k}")));
    }
    if n < k {
        return Err(Error::InvalidArgument(format!("{n} instances cannot fill {k} folds")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(seed).shuffle(&mut order);
    let (base, extra) = (n / k, n % k);
    let mut fold_of = vec![0; n];
    let mut pos = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < extra);
        for &i in &order[pos..pos + size] {
            fold_of[i] = fold;
        }
        pos += size;
    }
    Ok(FoldAssignment { k, seed, fold_of })
}

/// The model of one fold: vocabulary from `vocabulary` when given (whole
/// corpus mode), otherwise fitted on the training sections alone.
pub fn train_on_fold<T: Scalar>(
    corpus: &PreparedCorpus,
    train: &[usize],
    vocabulary: Option<&Vocabulary<T>>,
    config: &TrainConfig,
) -> Result<TrainedModel<T>> {
    match vocabulary {
        Some(v) => corpus.fit_model_with_vocabulary(train, v.clone(), config),
        None => corpus.fit_model(train, config),
    }
}

fn predict_indices<T: Scalar>(
    corpus: &PreparedCorpus,
    model: &TrainedModel<T>,
    indices: &[usize],
) -> Vec<Prediction<T>> {
    let fx: FeatureExtractor<'_, T> = model.extractor();
    indices
        .iter()
        .map(|&i| model.predict_row(&fx.to_row(&corpus.features(model.vocabulary(), i), model.config().feature_set)))
        .collect()
}

fn whole_vocabulary<T: Scalar>(corpus: &PreparedCorpus, scope: VocabularyScope) -> Result<Option<Vocabulary<T>>> {
    match scope {
        VocabularyScope::PerFold => Ok(None),
        VocabularyScope::WholeCorpus => corpus.fit_vocabulary(&corpus.all_indices()).map(Some),
    }
}

/// Pools held-out predictions over all folds and scores them.
pub fn cross_validate<T: Scalar>(
    corpus: &PreparedCorpus,
    config: &TrainConfig,
    options: &EvalOptions,
) -> Result<EvalReport<T>> {
    let folds = kfold(corpus.len(), options.folds, options.seed)?;
    let shared = whole_vocabulary::<T>(corpus, options.vocabulary)?;
    let per_fold: Vec<(Vec<usize>, Vec<Prediction<T>>)> = (0..folds.k)
        .into_par_iter()
        .map(|fold| {
            let model = train_on_fold(corpus, &folds.train_indices(fold), shared.as_ref(), config)
                .map_err(|e| Error::Fold { fold, source: Box::new(e) })?;
            let test = folds.test_indices(fold);
            let preds = predict_indices(corpus, &model, &test);
            Ok((test, preds))
        })
        .collect::<Result<_>>()?;
    let mut pooled: Vec<Option<Prediction<T>>> = vec![None; corpus.len()];
    for (test, preds) in per_fold {
        for (i, p) in test.into_iter().zip(preds) {
            pooled[i] = Some(p);
        }
    }
    let predictions: Vec<Prediction<T>> =
        pooled.into_iter().map(|p| p.expect("every instance is held out once")).collect();
    let truth: Vec<BTreeSet<Category>> = corpus.sections.iter().map(|s| s.categories.clone()).collect();
    EvalReport::from_predictions(&truth, &predictions, *config, *options)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct AblationRow<T> {
    pub feature_set: FeatureSet,
    pub report: EvalReport<T>,
}

/// Cross-validates with all features, statistical features only and
/// heuristic features only.
pub fn ablation<T: Scalar>(
    corpus: &PreparedCorpus,
    config: &TrainConfig,
    options: &EvalOptions,
) -> Result<Vec<AblationRow<T>>> {
    [FeatureSet::All, FeatureSet::StatisticalOnly, FeatureSet::HeuristicOnly]
        .into_iter()
        .map(|feature_set| {
            let config = TrainConfig { feature_set, ..*config };
            Ok(AblationRow { feature_set, report: cross_validate(corpus, &config, options)? })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FeatureWeight<T> {
    pub feature: String,
    pub mean: T,
    pub std_dev: T,
    pub samples: usize,
    /// Features sharing a group have overlapping mean ± 2σ intervals with
    /// the first feature of the group.
    pub group: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CategoryImportance<T> {
    pub category: Category,
    /// Sorted by mean weight, descending.
    pub ranking: Vec<FeatureWeight<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FeatureImportanceReport<T> {
    pub repeats: usize,
    pub folds: usize,
    pub categories: Vec<CategoryImportance<T>>,
}

impl<T: Scalar> FeatureImportanceReport<T> {
    pub fn category(&self, category: Category) -> &CategoryImportance<T> {
        &self.categories[category.index()]
    }

    /// Keeps the `n` best features of each category.
    pub fn truncated(mut self, n: usize) -> Self {
        for c in &mut self.categories {
            c.ranking.truncate(n);
        }
        self
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for c in &self.categories {
            out.push_str(&format!("{}\n", c.category.name()));
            for (rank, w) in c.ranking.iter().enumerate() {
                out.push_str(&format!(
                    "  {:>3}  {:<40} {:>9.4} {:>9.4}  group {}\n",
                    rank + 1,
                    w.feature,
                    w.mean.to_f64_lossy(),
                    w.std_dev.to_f64_lossy(),
                    w.group
                ));
            }
        }
        out
    }
}

fn rank_features<T: Scalar>(names: &[String], samples: &[&[T]]) -> Vec<FeatureWeight<T>> {
    let n = T::from_count(samples.len());
    let mut ranking: Vec<FeatureWeight<T>> = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let mean = samples.iter().map(|w| w[j]).fold(T::zero(), |a, v| a + v) / n;
            let var = if samples.len() > 1 {
                samples.iter().map(|w| (w[j] - mean) * (w[j] - mean)).fold(T::zero(), |a, v| a + v)
                    / T::from_count(samples.len() - 1)
            } else {
                T::zero()
            };
            FeatureWeight { feature: name.clone(), mean, std_dev: var.sqrt(), samples: samples.len(), group: 0 }
        })
        .collect();
    ranking.sort_by(|a, b| {
        b.mean.partial_cmp(&a.mean).unwrap_or(std::cmp::Ordering::Equal).then_with(|| a.feature.cmp(&b.feature))
    });
    let two = T::two();
    let mut group = 0;
    let mut leader_low = None;
    for w in &mut ranking {
        let high = w.mean + two * w.std_dev;
        match leader_low {
            Some(low) if high >= low => {}
            Some(_) => {
                group += 1;
                leader_low = Some(w.mean - two * w.std_dev);
            }
            None => leader_low = Some(w.mean - two * w.std_dev),
        }
        w.group = group;
    }
    ranking
}

/// Repeats k-fold cross-validation `repeats` times and collects every fold's
/// SVM weight vector per category. The vocabulary is fitted once on the whole
/// corpus so that columns line up across folds.
pub fn feature_importance<T: Scalar>(
    corpus: &PreparedCorpus,
    config: &TrainConfig,
    repeats: usize,
    k: usize,
    seed: u64,
) -> Result<FeatureImportanceReport<T>> {
    if config.algorithm != Algorithm::Svm {
        return Err(Error::NotLinear);
    }
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let vocabulary: Vocabulary<T> = corpus.fit_vocabulary(&corpus.all_indices())?;
    let runs: Vec<(usize, usize)> = (0..repeats).flat_map(|r| (0..k).map(move |f| (r, f))).collect();
    let assignments: Vec<FoldAssignment> = (0..repeats)
        .map(|r| kfold(corpus.len(), k, SeededRng::derive(seed, r as u64).next_u64()))
        .collect::<Result<_>>()?;
    let models: Vec<TrainedModel<T>> = runs
        .par_iter()
        .map(|&(r, fold)| {
            let repeat_config = TrainConfig { seed: SeededRng::derive(config.seed, r as u64).next_u64(), ..*config };
            train_on_fold(corpus, &assignments[r].train_indices(fold), Some(&vocabulary), &repeat_config)
                .map_err(|e| Error::Fold { fold, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let names = FeatureExtractor::new(&vocabulary, &corpus.patterns).feature_names();
    let categories = Category::ALL
        .iter()
        .map(|&c| {
            let samples: Vec<&[T]> = models.iter().map(|m| m.classifier(c).weights().expect("linear model")).collect();
            CategoryImportance { category: c, ranking: rank_features(&names, &samples) }
        })
        .collect();
    Ok(FeatureImportanceReport { repeats, folds: k, categories })
}
