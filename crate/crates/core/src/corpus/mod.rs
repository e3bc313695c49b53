//! Repository records, inclusion filters, annotated sections and the
//! development/evaluation split.

mod annotations;
mod fetch;
mod store;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use annotations::{load_annotations, parse_annotations, render_annotations, save_annotations, TSV_HEADER};
pub use fetch::{HttpResponse, RepoFetcher, Transport, API_ROOT};
pub use store::{read_repo, read_repo_store, write_repo};

use crate::category::{Category, Code};
use crate::error::{Error, Result};
use crate::features::stop_words;
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoRecord {
    pub repo_id: u64,
    pub full_name: String,
    #[serde(skip)]
    pub readme_bytes: Vec<u8>,
    pub detected_language_present: bool,
}

impl RepoRecord {
    pub fn new(repo_id: u64, full_name: impl Into<String>, readme_bytes: Vec<u8>, language: bool) -> Result<Self> {
        let full_name = full_name.into();
        validate_full_name(&full_name)?;
        Ok(RepoRecord { repo_id, full_name, readme_bytes, detected_language_present: language })
    }

    pub fn readme_text(&self) -> String {
        String::from_utf8_lossy(&self.readme_bytes).into_owned()
    }
}

pub(crate) fn validate_full_name(full_name: &str) -> Result<()> {
    let mut parts = full_name.split('/');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(o), Some(n), None) if !o.is_empty() && !n.is_empty() => Ok(()),
        _ => Err(Error::InvalidArgument(format!("repository name '{full_name}' must have the form owner/name"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FilterReason {
    TooSmall,
    NotSoftware,
    NotEnglish,
    Included,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterDecision {
    pub included: bool,
    pub reason: FilterReason,
}

impl From<FilterReason> for FilterDecision {
    fn from(reason: FilterReason) -> Self {
        FilterDecision { included: reason == FilterReason::Included, reason }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanguageCheck {
    /// Minimum share of stop-word tokens for English text.
    pub min_stopword_ratio: f64,
    /// Below this many alphabetic tokens the text is never flagged.
    pub min_tokens: usize,
}

impl Default for LanguageCheck {
    fn default() -> Self {
        LanguageCheck { min_stopword_ratio: 0.05, min_tokens: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub min_bytes: usize,
    pub language: LanguageCheck,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { min_bytes: 2048, language: LanguageCheck::default() }
    }
}

/// Applies the size, software and language filters in that order; the first
/// failing check decides.
pub fn filter_repo(record: &RepoRecord, config: &FilterConfig) -> FilterDecision {
    let reason = if record.readme_bytes.len() < config.min_bytes {
        FilterReason::TooSmall
    } else if !record.detected_language_present {
        FilterReason::NotSoftware
    } else if detect_non_english(&record.readme_text(), &config.language) {
        FilterReason::NotEnglish
    } else {
        FilterReason::Included
    };
    reason.into()
}

/// True when there are enough alphabetic tokens and too few of them are
/// English stop words.
pub fn detect_non_english(text: &str, check: &LanguageCheck) -> bool {
    let stop = stop_words();
    let mut total = 0usize;
    let mut hits = 0usize;
    for word in text.split(|c: char| !c.is_alphabetic()).filter(|w| !w.is_empty()) {
        total += 1;
        if stop.contains(word.to_lowercase().as_str()) {
            hits += 1;
        }
    }
    total >= check.min_tokens && (hits as f64) / (total as f64) < check.min_stopword_ratio
}

/// One annotated README section. `labels` holds annotation codes with `What`
/// and `Why` kept apart; [`AnnotatedSection::categories`] gives the merged
/// classification targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSection {
    pub section_id: String,
    pub file_id: String,
    pub heading_markdown: String,
    pub heading_level: u8,
    pub content_markdown: String,
    pub labels: BTreeSet<Code>,
}

impl AnnotatedSection {
    pub fn categories(&self) -> BTreeSet<Category> {
        self.labels.iter().map(|c| c.category()).collect()
    }

    /// Heading without ATX markers.
    pub fn heading_text(&self) -> String {
        let h = self.heading_markdown.trim();
        let hashes = h.chars().take_while(|&c| c == '#').count();
        if (1..=6).contains(&hashes) && (h.len() == hashes || h[hashes..].starts_with([' ', '\t'])) {
            let inner = h[hashes..].trim();
            let stripped = inner.trim_end_matches('#');
            if stripped.is_empty() {
                String::new()
            } else if stripped.len() != inner.len() && stripped.ends_with([' ', '\t']) {
                stripped.trim_end().to_string()
            } else {
                inner.to_string()
            }
        } else {
            h.to_string()
        }
    }

    /// Repository name implied by the file id: `owner__name` or `owner/name`
    /// give `name`; anything else is used whole.
    pub fn repo_name(&self) -> &str {
        repo_name_from_file_id(&self.file_id)
    }
}

pub fn repo_name_from_file_id(file_id: &str) -> &str {
    if let Some((_, name)) = file_id.rsplit_once('/') {
        name
    } else if let Some((_, name)) = file_id.split_once("__") {
        name
    } else {
        file_id
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub dev_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { dev_fraction: 0.25, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSplit {
    pub dev: Vec<AnnotatedSection>,
    pub eval: Vec<AnnotatedSection>,
}

/// Number of development files for `n_files`: the rounded fraction, kept
/// inside `1..n_files` so both sides are non-empty.
pub fn dev_file_count(n_files: usize, dev_fraction: f64) -> usize {
    ((dev_fraction * n_files as f64).round() as usize).clamp(1, n_files - 1)
}

/// Distinct file ids in lexicographic order, shuffled with the split seed.
pub fn shuffled_files(corpus: &[AnnotatedSection], seed: u64) -> Vec<String> {
    let files: BTreeSet<&str> = corpus.iter().map(|s| s.file_id.as_str()).collect();
    let mut files: Vec<String> = files.into_iter().map(str::to_string).collect();
    SeededRng::new(seed).shuffle(&mut files);
    files
}

/// Splits by file so every section of a file lands on the same side. Input
/// order is preserved within each side.
pub fn split_dev_eval(corpus: &[AnnotatedSection], spec: &SplitSpec) -> Result<CorpusSplit> {
    if !(spec.dev_fraction > 0.0 && spec.dev_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("dev fraction must lie in (0, 1), got {}", spec.dev_fraction)));
    }
    let files = shuffled_files(corpus, spec.seed);
    if files.len() < 2 {
        return Err(Error::InvalidArgument(format!("splitting needs at least 2 files, found {}", files.len())));
    }
    let n_dev = dev_file_count(files.len(), spec.dev_fraction);
    let dev_files: BTreeSet<&str> = files[..n_dev].iter().map(String::as_str).collect();
    let (dev, eval) = corpus.iter().cloned().partition(|s| dev_files.contains(s.file_id.as_str()));
    Ok(CorpusSplit { dev, eval })
}

/// Groups sections by file id, keeping first-seen file order.
pub fn group_by_file(corpus: &[AnnotatedSection]) -> Vec<(String, Vec<&AnnotatedSection>)> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&AnnotatedSection>> = BTreeMap::new();
    for s in corpus {
        let entry = groups.entry(s.file_id.as_str()).or_default();
        if entry.is_empty() {
            order.push(s.file_id.clone());
        }
        entry.push(s);
    }
    order
        .into_iter()
        .map(|f| {
            let g = groups.remove(f.as_str()).unwrap_or_default();
            (f, g)
        })
        .collect()
}
