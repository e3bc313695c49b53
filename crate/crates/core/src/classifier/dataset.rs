//! Annotated sections preprocessed once, so that vocabularies and models
//! can be fitted repeatedly on subsets (folds, repeats, ablations).

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{train_classifiers, TrainConfig, TrainedModel};
use crate::category::Category;
use crate::corpus::AnnotatedSection;
use crate::error::{Error, Result};
use crate::features::{
    english_words, fit_vocabulary, heuristic_flags, section_tokens, FeatureExtractor, FeatureVector, HeuristicPattern,
    Vocabulary,
};
use crate::markdown::repo_name_words;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq)]
pub struct PreparedSection {
    pub section_id: String,
    pub file_id: String,
    pub tokens: Vec<String>,
    pub heuristics: Vec<bool>,
    pub categories: BTreeSet<Category>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreparedCorpus {
    pub patterns: Vec<HeuristicPattern>,
    pub sections: Vec<PreparedSection>,
}

impl PreparedCorpus {
    pub fn new(sections: &[AnnotatedSection], patterns: Vec<HeuristicPattern>) -> Self {
        let wordlist = english_words();
        let prepared = sections
            .par_iter()
            .map(|s| {
                let heading = s.heading_text();
                let repo_words = repo_name_words(s.repo_name());
                PreparedSection {
                    section_id: s.section_id.clone(),
                    file_id: s.file_id.clone(),
                    tokens: section_tokens(&heading, &s.content_markdown),
                    heuristics: heuristic_flags(&heading, &s.content_markdown, &patterns, &repo_words, wordlist),
                    categories: s.categories(),
                }
            })
            .collect();
        PreparedCorpus { patterns, sections: prepared }
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.sections.len()).collect()
    }

    /// Keeps only the sections carrying exactly one category.
    pub fn single_label_only(&self) -> PreparedCorpus {
        PreparedCorpus {
            patterns: self.patterns.clone(),
            sections: self.sections.iter().filter(|s| s.categories.len() == 1).cloned().collect(),
        }
    }

    pub fn fit_vocabulary<T: Scalar>(&self, indices: &[usize]) -> Result<Vocabulary<T>> {
        let tokens: Vec<&[String]> = indices.iter().map(|&i| self.sections[i].tokens.as_slice()).collect();
        fit_vocabulary(&tokens)
    }

    pub fn features<T: Scalar>(&self, vocabulary: &Vocabulary<T>, index: usize) -> FeatureVector<T> {
        let s = &self.sections[index];
        FeatureVector { tfidf: crate::features::vectorize(&s.tokens, vocabulary), heuristics: s.heuristics.clone() }
    }

    pub fn rows<T: Scalar>(
        &self,
        vocabulary: &Vocabulary<T>,
        config: &TrainConfig,
        indices: &[usize],
    ) -> Vec<SparseVec<T>> {
        let fx = FeatureExtractor::new(vocabulary, &self.patterns);
        indices.iter().map(|&i| fx.to_row(&self.features(vocabulary, i), config.feature_set)).collect()
    }

    /// Fits a vocabulary on `indices` and trains on the same sections.
    pub fn fit_model<T: Scalar>(&self, indices: &[usize], config: &TrainConfig) -> Result<TrainedModel<T>> {
        let vocabulary = self.fit_vocabulary(indices)?;
        self.fit_model_with_vocabulary(indices, vocabulary, config)
    }

    /// Trains on `indices` using an already fitted vocabulary.
    pub fn fit_model_with_vocabulary<T: Scalar>(
        &self,
        indices: &[usize],
        vocabulary: Vocabulary<T>,
        config: &TrainConfig,
    ) -> Result<TrainedModel<T>> {
        if let Some(&i) = indices.iter().find(|&&i| self.sections[i].categories.is_empty()) {
            return Err(Error::Unlabeled(self.sections[i].section_id.clone()));
        }
        let rows = self.rows(&vocabulary, config, indices);
        let labels: Vec<BTreeSet<Category>> = indices.iter().map(|&i| self.sections[i].categories.clone()).collect();
        let dim = vocabulary.len() + self.patterns.len() + crate::features::FIXED_FLAGS.len();
        let classifiers = train_classifiers(&rows, &labels, dim, config)?;
        Ok(TrainedModel::from_parts(*config, vocabulary, self.patterns.clone(), classifiers))
    }
}
