//! A trained classifier bundle and its JSON model file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{train_classifiers, BinaryClassifier, Prediction, TrainConfig};
use crate::category::Category;
use crate::error::{Error, Result};
use crate::features::{patterns_checksum, FeatureExtractor, FeatureVector, HeuristicPattern, Vocabulary};
use crate::markdown::{repo_name_words, Section};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Vocabulary, patterns and one decision function per category. Immutable
/// once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel<T> {
    config: TrainConfig,
    vocabulary: Vocabulary<T>,
    patterns: Vec<HeuristicPattern>,
    classifiers: Vec<BinaryClassifier<T>>,
}

impl<T: Scalar> TrainedModel<T> {
    /// Trains from extracted feature vectors. `vocabulary` and `patterns`
    /// must be the ones the vectors were extracted with.
    pub fn train(
        vocabulary: Vocabulary<T>,
        patterns: Vec<HeuristicPattern>,
        examples: &[(FeatureVector<T>, BTreeSet<Category>)],
        config: &TrainConfig,
    ) -> Result<Self> {
        let fx = FeatureExtractor::new(&vocabulary, &patterns);
        let rows: Vec<SparseVec<T>> = examples.iter().map(|(fv, _)| fx.to_row(fv, config.feature_set)).collect();
        let labels: Vec<BTreeSet<Category>> = examples.iter().map(|(_, l)| l.clone()).collect();
        let dim = fx.dimension();
        let classifiers = train_classifiers(&rows, &labels, dim, config)?;
        Ok(TrainedModel { config: *config, vocabulary, patterns, classifiers })
    }

    pub(crate) fn from_parts(
        config: TrainConfig,
        vocabulary: Vocabulary<T>,
        patterns: Vec<HeuristicPattern>,
        classifiers: Vec<BinaryClassifier<T>>,
    ) -> Self {
        TrainedModel { config, vocabulary, patterns, classifiers }
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn vocabulary(&self) -> &Vocabulary<T> {
        &self.vocabulary
    }

    pub fn patterns(&self) -> &[HeuristicPattern] {
        &self.patterns
    }

    pub fn classifier(&self, category: Category) -> &BinaryClassifier<T> {
        &self.classifiers[category.index()]
    }

    pub fn extractor(&self) -> FeatureExtractor<'_, T> {
        FeatureExtractor::new(&self.vocabulary, &self.patterns)
    }

    pub fn dimension(&self) -> usize {
        self.extractor().dimension()
    }

    pub fn predict_row(&self, row: &SparseVec<T>) -> Prediction<T> {
        Prediction::from_scores(self.classifiers.iter().map(|c| c.decision(row)).collect())
    }

    pub fn predict_features(&self, fv: &FeatureVector<T>) -> Prediction<T> {
        self.predict_row(&self.extractor().to_row(fv, self.config.feature_set))
    }

    pub fn predict_text(&self, heading: &str, body: &str, repo_words: &BTreeSet<String>) -> Prediction<T> {
        self.predict_features(&self.extractor().extract(heading, body, repo_words))
    }

    pub fn predict(&self, section: &Section, repo_words: &BTreeSet<String>) -> Prediction<T> {
        self.predict_text(&section.heading_text, &section.body, repo_words)
    }

    /// Predicts every section of a README belonging to `repo_full_name`.
    pub fn predict_readme(&self, sections: &[Section], repo_full_name: &str) -> Vec<Prediction<T>> {
        let words = repo_name_words(repo_full_name);
        sections.iter().map(|s| self.predict(s, &words)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            schema_version: MODEL_SCHEMA_VERSION,
            config: self.config,
            vocabulary: self.vocabulary.clone(),
            patterns: self.patterns.clone(),
            patterns_sha256: patterns_checksum(&self.patterns),
            classifiers: Category::ALL
                .iter()
                .map(|c| (c.name().to_string(), self.classifiers[c.index()].clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::ModelFormat(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let header: VersionProbe = serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if header.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::SchemaVersion { found: header.schema_version, expected: MODEL_SCHEMA_VERSION });
        }
        let file: ModelFile<T> = serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
        let checksum = patterns_checksum(&file.patterns);
        if checksum != file.patterns_sha256 {
            return Err(Error::ModelFormat(format!(
                "pattern checksum mismatch: file records {}, patterns hash to {checksum}",
                file.patterns_sha256
            )));
        }
        let mut classifiers = file.classifiers;
        let ordered: Vec<BinaryClassifier<T>> = Category::ALL
            .iter()
            .map(|c| {
                classifiers.remove(c.name()).ok_or_else(|| Error::ModelFormat(format!("missing classifier for {c}")))
            })
            .collect::<Result<_>>()?;
        if let Some(extra) = classifiers.keys().next() {
            return Err(Error::ModelFormat(format!("unknown category '{extra}'")));
        }
        let model = TrainedModel::from_parts(file.config, file.vocabulary, file.patterns, ordered);
        let dim = model.dimension();
        for (c, clf) in Category::ALL.iter().zip(&model.classifiers) {
            if let Some(d) = clf.dimension() {
                if d != dim {
                    return Err(Error::ModelFormat(format!("{c}: {d} weights for {dim} features")));
                }
            }
            if let BinaryClassifier::NearestNeighbors(knn) = clf {
                if knn.rows.len() != knn.labels.len() || knn.rows.iter().any(|r| r.iter().any(|(j, _)| j >= dim)) {
                    return Err(Error::ModelFormat(format!("{c}: inconsistent neighbour store")));
                }
            }
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct ModelFile<T> {
    schema_version: u32,
    config: TrainConfig,
    vocabulary: Vocabulary<T>,
    patterns: Vec<HeuristicPattern>,
    patterns_sha256: String,
    classifiers: BTreeMap<String, BinaryClassifier<T>>,
}
