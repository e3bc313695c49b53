//! Binary and multi-label classification metrics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Confusion counts of one binarized label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn from_binary(truth: &[bool], predicted: &[bool]) -> Result<Self> {
        check_lengths(truth.len(), predicted.len())?;
        let mut c = Confusion::default();
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t, p) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (true, false) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidArgument(format!("length mismatch: {a} truths, {b} predictions")));
    }
    Ok(())
}

/// Indicator of `label` in every label set.
pub fn binarize<L: Ord>(sets: &[BTreeSet<L>], label: &L) -> Vec<bool> {
    sets.iter().map(|s| s.contains(label)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
}

fn ratio<T: Scalar>(num: usize, den: usize) -> T {
    if den == 0 {
        T::zero()
    } else {
        T::from_count(num) / T::from_count(den)
    }
}

/// Precision, recall and F1 of a binary confusion matrix. Each is 0 when its
/// denominator is 0.
pub fn prf<T: Scalar>(c: &Confusion) -> Prf<T> {
    let precision: T = ratio(c.tp, c.tp + c.fp);
    let recall: T = ratio(c.tp, c.tp + c.fn_);
    let f1 =
        if precision + recall == T::zero() { T::zero() } else { T::two() * precision * recall / (precision + recall) };
    Prf { precision, recall, f1 }
}

pub fn per_label_prf<T: Scalar, L: Ord>(truth: &[BTreeSet<L>], predicted: &[BTreeSet<L>], label: &L) -> Result<Prf<T>> {
    check_lengths(truth.len(), predicted.len())?;
    Ok(prf(&Confusion::from_binary(&binarize(truth, label), &binarize(predicted, label))?))
}

/// Cohen's kappa. When chance agreement is 1 (both raters constant and
/// equal) the raters agree perfectly and kappa is 1.
pub fn cohen_kappa<T: Scalar>(c: &Confusion) -> T {
    let n = T::from_count(c.total());
    if c.total() == 0 {
        return T::one();
    }
    let observed = T::from_count(c.tp + c.tn) / n;
    let pred_pos = T::from_count(c.tp + c.fp);
    let pred_neg = T::from_count(c.fn_ + c.tn);
    let true_pos = T::from_count(c.tp + c.fn_);
    let true_neg = T::from_count(c.fp + c.tn);
    let expected = (pred_pos * true_pos + pred_neg * true_neg) / (n * n);
    if expected == T::one() {
        return T::one();
    }
    (observed - expected) / (T::one() - expected)
}

/// Matthews correlation coefficient. With a zero denominator it is 1 for a
/// perfect prediction and 0 otherwise.
pub fn mcc<T: Scalar>(c: &Confusion) -> T {
    let f = |v: usize| T::from_count(v);
    let den = f(c.tp + c.fp) * f(c.tp + c.fn_) * f(c.tn + c.fp) * f(c.tn + c.fn_);
    if den == T::zero() {
        return if c.fp + c.fn_ == 0 { T::one() } else { T::zero() };
    }
    (f(c.tp) * f(c.tn) - f(c.fp) * f(c.fn_)) / den.sqrt()
}

/// Area under the ROC curve as the Mann-Whitney rank statistic; tied scores
/// get their average rank, so a tied positive/negative pair counts ½.
/// `None` when only one class is present.
pub fn roc_auc<T: Scalar>(truth: &[bool], scores: &[T]) -> Result<Option<T>> {
    check_lengths(truth.len(), scores.len())?;
    let n_pos = truth.iter().filter(|&&t| t).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut rank_sum_pos = T::zero();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let mean_rank = T::from_count(i + j + 2) / T::two();
        let positives = order[i..=j].iter().filter(|&&k| truth[k]).count();
        rank_sum_pos = rank_sum_pos + mean_rank * T::from_count(positives);
        i = j + 1;
    }
    let (p, q) = (T::from_count(n_pos), T::from_count(n_neg));
    Ok(Some((rank_sum_pos - p * (p + T::one()) / T::two()) / (p * q)))
}

/// Share of every label among all true label occurrences.
pub fn label_weights<T: Scalar, L: Ord>(truth: &[BTreeSet<L>], labels: &[L]) -> Vec<T> {
    let counts: Vec<usize> = labels.iter().map(|l| truth.iter().filter(|s| s.contains(l)).count()).collect();
    let total: usize = counts.iter().sum();
    counts.into_iter().map(|c| ratio(c, total)).collect()
}

/// `sum(w_l * v_l)`; with `divide_by_label_count` the sum is further divided
/// by the number of labels.
pub fn weighted_mean<T: Scalar>(values: &[T], weights: &[T], divide_by_label_count: bool) -> T {
    let sum = values.iter().zip(weights).fold(T::zero(), |a, (&v, &w)| a + v * w);
    if divide_by_label_count && !values.is_empty() {
        sum / T::from_count(values.len())
    } else {
        sum
    }
}

/// Weighted mean over the labels whose value is defined, with the weights
/// of the remaining labels renormalised to sum to 1. `None` if no label with
/// positive weight has a value.
pub fn weighted_mean_present<T: Scalar>(values: &[Option<T>], weights: &[T]) -> Option<T> {
    let mut total = T::zero();
    let mut acc = T::zero();
    for (v, &w) in values.iter().zip(weights) {
        if let Some(v) = v {
            acc = acc + *v * w;
            total = total + w;
        }
    }
    (total > T::zero()).then(|| acc / total)
}
