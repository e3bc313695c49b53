//! Association rules over label sets, mined with apriori.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display};

use serde::{Deserialize, Serialize};

use crate::category::{Category, Code};
use crate::corpus::AnnotatedSection;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction<I: Ord> {
    pub id: String,
    pub items: BTreeSet<I>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Section,
    File,
}

/// Minimum support as a share of the transactions or as a transaction count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinSupport {
    Fraction(f64),
    Count(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "I: Serialize, T: Serialize",
    deserialize = "I: Deserialize<'de> + Ord, T: Deserialize<'de>"
))]
pub struct AssociationRule<I: Ord, T> {
    pub antecedent: BTreeSet<I>,
    pub consequent: BTreeSet<I>,
    /// Number of transactions containing antecedent and consequent.
    pub count: usize,
    pub support: T,
    pub confidence: T,
}

fn braces<I: Display>(items: &BTreeSet<I>) -> String {
    let inner: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

impl<I: Ord + Display, T: Scalar> Display for AssociationRule<I, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {}  support {:.3}  confidence {:.3}",
            braces(&self.antecedent),
            braces(&self.consequent),
            self.support.to_f64_lossy(),
            self.confidence.to_f64_lossy()
        )
    }
}

fn collect_transactions<I: Ord + Copy>(
    corpus: &[AnnotatedSection],
    level: Level,
    items: impl Fn(&AnnotatedSection) -> BTreeSet<I>,
) -> Vec<Transaction<I>> {
    let raw: Vec<Transaction<I>> = match level {
        Level::Section => corpus.iter().map(|s| Transaction { id: s.section_id.clone(), items: items(s) }).collect(),
        Level::File => {
            let mut by_file: BTreeMap<&str, BTreeSet<I>> = BTreeMap::new();
            let mut order = Vec::new();
            for s in corpus {
                by_file
                    .entry(s.file_id.as_str())
                    .or_insert_with(|| {
                        order.push(s.file_id.as_str());
                        BTreeSet::new()
                    })
                    .extend(items(s));
            }
            order
                .into_iter()
                .map(|f| Transaction { id: f.to_string(), items: by_file.remove(f).unwrap_or_default() })
                .collect()
        }
    };
    raw.into_iter().filter(|t| !t.items.is_empty()).collect()
}

/// Transactions over the annotation codes, with What and Why kept apart.
/// Exclusion is dropped and transactions left empty are omitted.
pub fn to_transactions(corpus: &[AnnotatedSection], level: Level) -> Vec<Transaction<Code>> {
    collect_transactions(corpus, level, |s| s.labels.iter().copied().filter(|&c| c != Code::Exclusion).collect())
}

/// Like [`to_transactions`] but over the merged categories.
pub fn to_category_transactions(corpus: &[AnnotatedSection], level: Level) -> Vec<Transaction<Category>> {
    collect_transactions(corpus, level, |s| s.categories().into_iter().filter(|&c| c != Category::Exclusion).collect())
}

/// Frequent itemsets with their transaction counts, found level by level.
pub fn frequent_itemsets<I: Ord + Clone>(
    transactions: &[Transaction<I>],
    is_frequent: impl Fn(usize) -> bool,
) -> BTreeMap<BTreeSet<I>, usize> {
    let mut frequent = BTreeMap::new();
    let mut singles: BTreeMap<I, usize> = BTreeMap::new();
    for t in transactions {
        for i in &t.items {
            *singles.entry(i.clone()).or_default() += 1;
        }
    }
    let mut level: Vec<Vec<I>> = singles
        .into_iter()
        .filter(|(_, c)| is_frequent(*c))
        .map(|(i, c)| {
            frequent.insert(BTreeSet::from([i.clone()]), c);
            vec![i]
        })
        .collect();
    while level.len() > 1 {
        let previous: BTreeSet<&[I]> = level.iter().map(|v| v.as_slice()).collect();
        let mut candidates = Vec::new();
        for (a_idx, a) in level.iter().enumerate() {
            for b in &level[a_idx + 1..] {
                let k = a.len();
                if a[..k - 1] != b[..k - 1] {
                    break;
                }
                let mut joined = a.clone();
                joined.push(b[k - 1].clone());
                let all_subsets_frequent = (0..joined.len()).all(|skip| {
                    let sub: Vec<I> =
                        joined.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v.clone()).collect();
                    previous.contains(sub.as_slice())
                });
                if all_subsets_frequent {
                    candidates.push(joined);
                }
            }
        }
        let mut next = Vec::new();
        for cand in candidates {
            let count = transactions.iter().filter(|t| cand.iter().all(|i| t.items.contains(i))).count();
            if is_frequent(count) {
                frequent.insert(cand.iter().cloned().collect(), count);
                next.push(cand);
            }
        }
        level = next;
    }
    frequent
}

fn proper_subsets<I: Ord + Clone>(set: &BTreeSet<I>) -> Vec<BTreeSet<I>> {
    let items: Vec<&I> = set.iter().collect();
    (1..(1u64 << items.len()) - 1)
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| (*v).clone()).collect())
        .collect()
}

/// Every rule `A => B` with `A ∪ B` frequent and confidence at least
/// `min_confidence`. Sorted by confidence and support (both descending),
/// then by antecedent and consequent.
pub fn mine_rules<I: Ord + Clone, T: Scalar>(
    transactions: &[Transaction<I>],
    min_support: MinSupport,
    min_confidence: f64,
) -> Result<Vec<AssociationRule<I, T>>> {
    match min_support {
        MinSupport::Fraction(f) if !(f > 0.0 && f <= 1.0) => {
            return Err(Error::InvalidArgument(format!("minimum support must be in (0, 1], got {f}")));
        }
        MinSupport::Count(0) => return Err(Error::InvalidArgument("minimum count must be at least 1".into())),
        _ => {}
    }
    if !(min_confidence > 0.0 && min_confidence <= 1.0) {
        return Err(Error::InvalidArgument(format!("minimum confidence must be in (0, 1], got {min_confidence}")));
    }
    if transactions.is_empty() {
        return Ok(Vec::new());
    }
    let n = T::from_count(transactions.len());
    let is_frequent = |count: usize| match min_support {
        MinSupport::Fraction(f) => T::from_count(count) / n >= T::from_f64_lossy(f),
        MinSupport::Count(c) => count >= c,
    };
    let frequent = frequent_itemsets(transactions, is_frequent);
    let min_confidence = T::from_f64_lossy(min_confidence);
    let mut rules = Vec::new();
    for (itemset, &count) in frequent.iter().filter(|(s, _)| s.len() > 1) {
        for antecedent in proper_subsets(itemset) {
            let confidence = T::from_count(count) / T::from_count(frequent[&antecedent]);
            if confidence >= min_confidence {
                let consequent = itemset.difference(&antecedent).cloned().collect();
                rules.push(AssociationRule {
                    antecedent,
                    consequent,
                    count,
                    support: T::from_count(count) / n,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        b.confidence
            .partial_cmp(&a.confidence)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.support.partial_cmp(&a.support).unwrap_or(std::cmp::Ordering::Equal))
            .then_with(|| a.antecedent.iter().cmp(b.antecedent.iter()))
            .then_with(|| a.consequent.iter().cmp(b.consequent.iter()))
    });
    Ok(rules)
}
