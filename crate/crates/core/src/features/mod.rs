//! Section feature extraction: content abstraction, tokenization, TF-IDF
//! over a fitted vocabulary, and binary heuristic flags.

mod abstraction;
mod heuristics;
mod tokenize;
mod vocabulary;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use abstraction::{abstract_content, AbstractedText, PLACEHOLDERS};
pub use heuristics::{
    builtin_patterns, english_words, heuristic_flags, load_patterns, parse_patterns, patterns_checksum,
    render_patterns, HeuristicPattern, PatternTarget, FIXED_FLAGS,
};
pub use tokenize::{stop_words, tokenize};
pub use vocabulary::{fit_vocabulary, vectorize, Vocabulary};

use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector<T> {
    pub tfidf: SparseVec<T>,
    pub heuristics: Vec<bool>,
}

/// Which feature families feed the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FeatureSet {
    #[default]
    All,
    StatisticalOnly,
    HeuristicOnly,
}

/// Tokens of a section: heading and body abstracted and tokenized together.
pub fn section_tokens(heading: &str, body: &str) -> Vec<String> {
    let text = format!("{heading}\n\n{body}");
    tokenize(&abstract_content(&text))
}

/// Extracts features against a fitted vocabulary and pattern list. The
/// column layout is `[tf-idf columns | pattern flags | 3 fixed flags]`.
#[derive(Debug, Clone, Copy)]
pub struct FeatureExtractor<'a, T> {
    pub vocabulary: &'a Vocabulary<T>,
    pub patterns: &'a [HeuristicPattern],
    pub wordlist: &'a HashSet<&'static str>,
}

impl<'a, T: Scalar> FeatureExtractor<'a, T> {
    pub fn new(vocabulary: &'a Vocabulary<T>, patterns: &'a [HeuristicPattern]) -> Self {
        FeatureExtractor { vocabulary, patterns, wordlist: english_words() }
    }

    pub fn heuristic_count(&self) -> usize {
        self.patterns.len() + FIXED_FLAGS.len()
    }

    pub fn dimension(&self) -> usize {
        self.vocabulary.len() + self.heuristic_count()
    }

    pub fn extract(&self, heading: &str, body: &str, repo_words: &BTreeSet<String>) -> FeatureVector<T> {
        self.extract_with_tokens(&section_tokens(heading, body), heading, body, repo_words)
    }

    pub fn extract_with_tokens(
        &self,
        tokens: &[String],
        heading: &str,
        body: &str,
        repo_words: &BTreeSet<String>,
    ) -> FeatureVector<T> {
        FeatureVector {
            tfidf: vectorize(tokens, self.vocabulary),
            heuristics: heuristic_flags(heading, body, self.patterns, repo_words, self.wordlist),
        }
    }

    /// Flattens a feature vector into one sparse row over the full layout.
    pub fn to_row(&self, fv: &FeatureVector<T>, set: FeatureSet) -> SparseVec<T> {
        let offset = self.vocabulary.len();
        let mut pairs = Vec::with_capacity(fv.tfidf.len() + fv.heuristics.len());
        if set != FeatureSet::HeuristicOnly {
            pairs.extend(fv.tfidf.iter());
        }
        if set != FeatureSet::StatisticalOnly {
            pairs.extend(fv.heuristics.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| (offset + i, T::one())));
        }
        SparseVec::from_pairs(pairs)
    }

    /// Identifier of every column: tokens, pattern ids, then fixed flag ids.
    pub fn feature_names(&self) -> Vec<String> {
        self.vocabulary
            .tokens()
            .iter()
            .cloned()
            .chain(self.patterns.iter().map(|p| p.id.clone()))
            .chain(FIXED_FLAGS.iter().map(|s| s.to_string()))
            .collect()
    }
}
