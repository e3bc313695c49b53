//! Class balancing for one binary problem.

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

fn class_counts(labels: &[bool]) -> Result<(usize, usize)> {
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::DegenerateLabel);
    }
    Ok((pos, neg))
}

/// Indices of the balanced training set: every original index once, then
/// minority indices drawn uniformly with replacement until both classes have
/// the same size.
pub fn oversample_duplicate(labels: &[bool], seed: u64) -> Result<Vec<usize>> {
    let (pos, neg) = class_counts(labels)?;
    let mut out: Vec<usize> = (0..labels.len()).collect();
    if pos == neg {
        return Ok(out);
    }
    let minority_label = pos < neg;
    let minority: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == minority_label).collect();
    let needed = pos.abs_diff(neg);
    let mut rng = SeededRng::new(seed);
    out.extend((0..needed).map(|_| minority[rng.index(minority.len())]));
    Ok(out)
}

/// A balanced set produced by SMOTE: the original rows followed by synthetic
/// minority rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoteOutput<T> {
    pub rows: Vec<SparseVec<T>>,
    pub labels: Vec<bool>,
    /// Number of leading rows copied from the input.
    pub original: usize,
}

/// `k` nearest other points for each point, by squared Euclidean distance;
/// ties go to the lower index.
fn nearest_neighbors<T: Scalar>(points: &[&SparseVec<T>], k: usize) -> Vec<Vec<usize>> {
    (0..points.len())
        .map(|i| {
            let mut d: Vec<(T, usize)> =
                (0..points.len()).filter(|&j| j != i).map(|j| (points[i].squared_distance(points[j]), j)).collect();
            d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
            d.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect()
}

/// Synthetic minority oversampling. Each synthetic row is
/// `x + u * (x' - x)` where `x` is a uniformly drawn minority row, `x'` one of
/// its `k` nearest minority neighbours, and `u` uniform in `[0, 1)`.
pub fn oversample_smote<T: Scalar>(
    rows: &[SparseVec<T>],
    labels: &[bool],
    k: usize,
    seed: u64,
) -> Result<SmoteOutput<T>> {
    assert_eq!(rows.len(), labels.len(), "rows and labels differ in length");
    let (pos, neg) = class_counts(labels)?;
    let mut out = SmoteOutput { rows: rows.to_vec(), labels: labels.to_vec(), original: rows.len() };
    if pos == neg {
        return Ok(out);
    }
    let minority_label = pos < neg;
    let minority: Vec<&SparseVec<T>> =
        rows.iter().zip(labels).filter(|(_, &l)| l == minority_label).map(|(r, _)| r).collect();
    if k == 0 || minority.len() < k + 1 {
        return Err(Error::TooFewForSmote { needed: k + 1, found: minority.len() });
    }
    let neighbors = nearest_neighbors(&minority, k);
    let mut rng = SeededRng::new(seed);
    for _ in 0..pos.abs_diff(neg) {
        let base = rng.index(minority.len());
        let other = neighbors[base][rng.index(k)];
        let u = T::from_f64_lossy(rng.unit());
        out.rows.push(minority[base].interpolate(minority[other], u));
        out.labels.push(minority_label);
    }
    Ok(out)
}
