use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// Fitted token index with reciprocal document frequencies.
///
/// Columns are assigned in lexicographic token order and
/// `idf(t) = 1 / df(t)` where `df(t)` is the number of fitted sections that
/// contain `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary<T> {
    tokens: Vec<String>,
    doc_freq: Vec<usize>,
    idf: Vec<T>,
    index: HashMap<String, usize>,
}

impl<T: Scalar> Vocabulary<T> {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, col: usize) -> &str {
        &self.tokens[col]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn idf(&self, col: usize) -> T {
        self.idf[col]
    }

    pub fn doc_freq(&self, col: usize) -> usize {
        self.doc_freq[col]
    }

    fn from_parts(tokens: Vec<String>, doc_freq: Vec<usize>) -> Self {
        let idf = doc_freq.iter().map(|&df| T::one() / T::from_count(df)).collect();
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { tokens, doc_freq, idf, index }
    }
}

/// Fits a vocabulary over tokenized sections.
pub fn fit_vocabulary<T: Scalar, S: AsRef<[String]>>(sections: &[S]) -> Result<Vocabulary<T>> {
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for section in sections {
        let mut seen: Vec<&str> = section.as_ref().iter().map(String::as_str).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *df.entry(t).or_default() += 1;
        }
    }
    if df.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let (tokens, doc_freq) = df.into_iter().map(|(t, n)| (t.to_string(), n)).unzip();
    Ok(Vocabulary::from_parts(tokens, doc_freq))
}

/// TF-IDF weights of one section: raw term count times the token's idf.
/// Tokens outside the vocabulary are ignored.
pub fn vectorize<T: Scalar>(tokens: &[String], vocab: &Vocabulary<T>) -> SparseVec<T> {
    let mut tf: BTreeMap<usize, usize> = BTreeMap::new();
    for t in tokens {
        if let Some(col) = vocab.index_of(t) {
            *tf.entry(col).or_default() += 1;
        }
    }
    SparseVec::from_pairs(tf.into_iter().map(|(col, n)| (col, T::from_count(n) * vocab.idf(col))).collect())
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    token: String,
    index: usize,
    idf: T,
    doc_freq: usize,
}

impl<T: Scalar> Serialize for Vocabulary<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry<T>> = (0..self.len())
            .map(|i| Entry { token: self.tokens[i].clone(), index: i, idf: self.idf[i], doc_freq: self.doc_freq[i] })
            .collect();
        entries.serialize(serializer)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Vocabulary<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let entries: Vec<Entry<T>> = Vec::deserialize(deserializer)?;
        let mut tokens = Vec::with_capacity(entries.len());
        let mut doc_freq = Vec::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            if e.index != i {
                return Err(D::Error::custom(format!("vocabulary index {} out of order at {}", e.index, i)));
            }
            if e.doc_freq == 0 {
                return Err(D::Error::custom(format!("token '{}' has zero document frequency", e.token)));
            }
            if let Some(prev) = tokens.last() {
                if *prev >= e.token {
                    return Err(D::Error::custom("vocabulary tokens are not sorted"));
                }
            }
            tokens.push(e.token);
            doc_freq.push(e.doc_freq);
        }
        Ok(Vocabulary::from_parts(tokens, doc_freq))
    }
}
