//! Multinomial naive Bayes over non-negative feature values.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// Parameters of a two-class multinomial model with add-one smoothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NaiveBayes<T> {
    pub log_prior_pos: T,
    pub log_prior_neg: T,
    pub log_prob_pos: Vec<T>,
    pub log_prob_neg: Vec<T>,
}

impl<T: Scalar> NaiveBayes<T> {
    pub fn fit(rows: &[SparseVec<T>], labels: &[bool], dim: usize) -> Self {
        let mut mass_pos = vec![T::zero(); dim];
        let mut mass_neg = vec![T::zero(); dim];
        let mut n_pos = 0usize;
        for (x, &l) in rows.iter().zip(labels) {
            let target = if l {
                n_pos += 1;
                &mut mass_pos
            } else {
                &mut mass_neg
            };
            for (j, v) in x.iter() {
                target[j] = target[j] + v;
            }
        }
        let n = T::from_count(rows.len());
        let log_probs = |mass: Vec<T>| -> Vec<T> {
            let total = mass.iter().fold(T::zero(), |a, &v| a + v) + T::from_count(dim);
            mass.into_iter().map(|m| ((m + T::one()) / total).ln()).collect()
        };
        NaiveBayes {
            log_prior_pos: (T::from_count(n_pos) / n).ln(),
            log_prior_neg: (T::from_count(rows.len() - n_pos) / n).ln(),
            log_prob_pos: log_probs(mass_pos),
            log_prob_neg: log_probs(mass_neg),
        }
    }

    /// Log-odds of the positive class.
    pub fn decision(&self, x: &SparseVec<T>) -> T {
        let mut score = self.log_prior_pos - self.log_prior_neg;
        for (j, v) in x.iter() {
            if j < self.log_prob_pos.len() {
                score = score + v * (self.log_prob_pos[j] - self.log_prob_neg[j]);
            }
        }
        score
    }

    pub fn dimension(&self) -> usize {
        self.log_prob_pos.len()
    }
}
