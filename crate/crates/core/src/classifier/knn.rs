//! k-nearest-neighbour scoring over stored training rows.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NearestNeighbors<T> {
    pub k: usize,
    pub rows: Vec<SparseVec<T>>,
    pub labels: Vec<bool>,
}

impl<T: Scalar> NearestNeighbors<T> {
    pub fn fit(rows: &[SparseVec<T>], labels: &[bool], k: usize) -> Self {
        NearestNeighbors { k, rows: rows.to_vec(), labels: labels.to_vec() }
    }

    /// `(positive - negative) / k` over the `k` closest stored rows; equal
    /// distances go to the earlier row.
    pub fn decision(&self, x: &SparseVec<T>) -> T {
        let mut dist: Vec<(T, usize)> = self.rows.iter().enumerate().map(|(i, r)| (r.squared_distance(x), i)).collect();
        let k = self.k.min(dist.len());
        if k == 0 {
            return T::zero();
        }
        let cmp = |a: &(T, usize), b: &(T, usize)| {
            a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1))
        };
        if k < dist.len() {
            dist.select_nth_unstable_by(k - 1, cmp);
        }
        let votes = dist[..k].iter().fold(0i64, |acc, &(_, i)| acc + if self.labels[i] { 1 } else { -1 });
        T::from_i64(votes).expect("small integer") / T::from_count(self.k)
    }
}
