//! Binary-relevance multi-label classification: one independent binary
//! classifier per [`Category`], trained on a class-balanced copy of the data.

mod bayes;
mod dataset;
mod knn;
mod logistic;
mod model;
mod oversample;
mod svm;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bayes::NaiveBayes;
pub use dataset::{PreparedCorpus, PreparedSection};
pub use knn::NearestNeighbors;
pub use logistic::train_logistic;
pub use model::{TrainedModel, MODEL_SCHEMA_VERSION};
pub use oversample::{oversample_duplicate, oversample_smote, SmoteOutput};
pub use svm::{train_svm, LinearFit, SolverParams};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::rng::SeededRng;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[default]
    Svm,
    Lr,
    Nb,
    Knn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Oversampler {
    #[default]
    Duplicate,
    Smote,
    None,
}

macro_rules! keyword_enum {
    ($ty:ty { $($variant:path => $word:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $word),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($word => Ok($variant),)+
                    _ => Err(Error::InvalidArgument(format!("unknown {} '{s}'", stringify!($ty).to_lowercase()))),
                }
            }
        }
    };
}

keyword_enum!(Algorithm { Algorithm::Svm => "svm", Algorithm::Lr => "lr", Algorithm::Nb => "nb", Algorithm::Knn => "knn" });
keyword_enum!(Oversampler { Oversampler::Duplicate => "duplicate", Oversampler::Smote => "smote", Oversampler::None => "none" });

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub algorithm: Algorithm,
    pub oversampler: Oversampler,
    /// Regularisation constant for SVM and LR.
    pub c: f64,
    pub knn_k: usize,
    pub smote_k: usize,
    pub seed: u64,
    /// Relative duality gap (SVM) or gradient norm reduction (LR).
    pub tolerance: f64,
    pub max_epochs: usize,
    pub feature_set: FeatureSet,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            algorithm: Algorithm::Svm,
            oversampler: Oversampler::Duplicate,
            c: 1.0,
            knn_k: 5,
            smote_k: 5,
            seed: 0,
            tolerance: 1e-4,
            max_epochs: 1000,
            feature_set: FeatureSet::All,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!("C must be positive, got {}", self.c)));
        }
        if self.knn_k == 0 || self.smote_k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidArgument("max_epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// The decision function of one category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum BinaryClassifier<T> {
    Linear { weights: Vec<T>, bias: T },
    NaiveBayes(NaiveBayes<T>),
    NearestNeighbors(NearestNeighbors<T>),
}

impl<T: Scalar> BinaryClassifier<T> {
    pub fn decision(&self, x: &SparseVec<T>) -> T {
        match self {
            BinaryClassifier::Linear { weights, bias } => x.dot(weights) + *bias,
            BinaryClassifier::NaiveBayes(nb) => nb.decision(x),
            BinaryClassifier::NearestNeighbors(knn) => knn.decision(x),
        }
    }

    pub fn weights(&self) -> Option<&[T]> {
        match self {
            BinaryClassifier::Linear { weights, .. } => Some(weights),
            _ => None,
        }
    }

    /// Number of feature columns the classifier expects, when it records one.
    pub(crate) fn dimension(&self) -> Option<usize> {
        match self {
            BinaryClassifier::Linear { weights, .. } => Some(weights.len()),
            BinaryClassifier::NaiveBayes(nb) => Some(nb.dimension()),
            BinaryClassifier::NearestNeighbors(_) => None,
        }
    }
}

/// Predicted categories and the decision value of every category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Prediction<T> {
    pub labels: BTreeSet<Category>,
    /// Indexed by [`Category::index`].
    pub scores: Vec<T>,
}

impl<T: Scalar> Prediction<T> {
    /// Every category scoring above zero, or the best-scoring one when none
    /// does.
    pub fn from_scores(scores: Vec<T>) -> Self {
        let mut labels: BTreeSet<Category> =
            Category::ALL.iter().copied().filter(|c| scores[c.index()] > T::zero()).collect();
        if labels.is_empty() {
            let mut best = 0;
            for (i, &s) in scores.iter().enumerate() {
                if s > scores[best] {
                    best = i;
                }
            }
            labels.insert(Category::ALL[best]);
        }
        Prediction { labels, scores }
    }

    pub fn score(&self, category: Category) -> T {
        self.scores[category.index()]
    }
}

/// Seed of every stochastic step for one category, independent of the
/// other categories.
fn category_seed(seed: u64, category: Category) -> u64 {
    SeededRng::derive(seed, category.index() as u64).next_u64()
}

fn train_binary<T: Scalar>(
    rows: &[SparseVec<T>],
    labels: &[bool],
    dim: usize,
    config: &TrainConfig,
    seed: u64,
) -> Result<BinaryClassifier<T>> {
    let mut streams = SeededRng::new(seed);
    let (balance_seed, solver_seed) = (streams.next_u64(), streams.next_u64());
    let smote;
    let picked: Vec<SparseVec<T>>;
    let (rows, labels): (&[SparseVec<T>], Vec<bool>) = match config.oversampler {
        Oversampler::None => (rows, labels.to_vec()),
        Oversampler::Duplicate => {
            let idx = oversample_duplicate(labels, balance_seed)?;
            picked = idx.iter().map(|&i| rows[i].clone()).collect();
            (&picked, idx.iter().map(|&i| labels[i]).collect())
        }
        Oversampler::Smote => {
            smote = oversample_smote(rows, labels, config.smote_k, balance_seed)?;
            (&smote.rows, smote.labels.clone())
        }
    };
    let params =
        SolverParams { c: config.c, tolerance: config.tolerance, max_epochs: config.max_epochs, seed: solver_seed };
    Ok(match config.algorithm {
        Algorithm::Svm => {
            let fit = train_svm(rows, &labels, dim, &params);
            BinaryClassifier::Linear { weights: fit.weights, bias: fit.bias }
        }
        Algorithm::Lr => {
            let fit = train_logistic(rows, &labels, dim, &params);
            BinaryClassifier::Linear { weights: fit.weights, bias: fit.bias }
        }
        Algorithm::Nb => BinaryClassifier::NaiveBayes(NaiveBayes::fit(rows, &labels, dim)),
        Algorithm::Knn => BinaryClassifier::NearestNeighbors(NearestNeighbors::fit(rows, &labels, config.knn_k)),
    })
}

/// Trains one classifier per category, in [`Category::ALL`] order.
///
/// Fails with [`Error::DegenerateCategory`] when some category has no
/// positive or no negative example.
pub fn train_classifiers<T: Scalar>(
    rows: &[SparseVec<T>],
    labels: &[BTreeSet<Category>],
    dim: usize,
    config: &TrainConfig,
) -> Result<Vec<BinaryClassifier<T>>> {
    config.validate()?;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no training instances".into()));
    }
    assert_eq!(rows.len(), labels.len(), "rows and labels differ in length");
    let binarized: Vec<Vec<bool>> =
        Category::ALL.iter().map(|c| labels.iter().map(|set| set.contains(c)).collect()).collect();
    for (c, column) in Category::ALL.iter().zip(&binarized) {
        let pos = column.iter().filter(|&&b| b).count();
        if pos == 0 || pos == column.len() {
            return Err(Error::DegenerateCategory(*c));
        }
    }
    Category::ALL
        .par_iter()
        .zip(binarized.par_iter())
        .map(|(&c, column)| train_binary(rows, column, dim, config, category_seed(config.seed, c)))
        .collect()
}
