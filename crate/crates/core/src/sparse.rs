use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Sparse vector stored as `(column, value)` pairs sorted by column, with no
/// duplicate columns and no explicit zeros.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseVec<T>(Vec<(usize, T)>);

impl<T: Scalar> SparseVec<T> {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    /// Builds from arbitrary pairs; duplicates are summed and zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(usize, T)>) -> Self {
        pairs.sort_by_key(|&(i, _)| i);
        let mut out: Vec<(usize, T)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = *acc + v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|&(_, v)| v != T::zero());
        SparseVec(out)
    }

    pub fn entries(&self) -> &[(usize, T)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, col: usize) -> T {
        self.0.binary_search_by_key(&col, |&(i, _)| i).map_or(T::zero(), |k| self.0[k].1)
    }

    /// Dot product with a dense vector; columns past its end contribute 0.
    pub fn dot(&self, dense: &[T]) -> T {
        self.0.iter().filter(|(i, _)| *i < dense.len()).fold(T::zero(), |acc, &(i, v)| acc + v * dense[i])
    }

    pub fn norm_sq(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &(_, v)| acc + v * v)
    }

    pub fn squared_distance(&self, other: &SparseVec<T>) -> T {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut acc = T::zero();
        while i < a.len() || j < b.len() {
            let d = match (a.get(i), b.get(j)) {
                (Some(&(ia, va)), Some(&(ib, vb))) if ia == ib => {
                    i += 1;
                    j += 1;
                    va - vb
                }
                (Some(&(ia, va)), Some(&(ib, _))) if ia < ib => {
                    i += 1;
                    va
                }
                (Some(_), Some(&(_, vb))) => {
                    j += 1;
                    vb
                }
                (Some(&(_, va)), None) => {
                    i += 1;
                    va
                }
                (None, Some(&(_, vb))) => {
                    j += 1;
                    vb
                }
                (None, None) => unreachable!(),
            };
            acc = acc + d * d;
        }
        acc
    }

    /// `self + t * (other - self)`, evaluated entrywise in that form.
    pub fn interpolate(&self, other: &SparseVec<T>, t: T) -> SparseVec<T> {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let (col, x, y) = match (a.get(i), b.get(j)) {
                (Some(&(ia, va)), Some(&(ib, vb))) if ia == ib => {
                    i += 1;
                    j += 1;
                    (ia, va, vb)
                }
                (Some(&(ia, va)), Some(&(ib, _))) if ia < ib => {
                    i += 1;
                    (ia, va, T::zero())
                }
                (Some(_), Some(&(ib, vb))) | (None, Some(&(ib, vb))) => {
                    j += 1;
                    (ib, T::zero(), vb)
                }
                (Some(&(ia, va)), None) => {
                    i += 1;
                    (ia, va, T::zero())
                }
                (None, None) => unreachable!(),
            };
            let v = x + t * (y - x);
            if v != T::zero() {
                out.push((col, v));
            }
        }
        SparseVec(out)
    }

    pub fn scaled(&self, factor: T) -> SparseVec<T> {
        SparseVec::from_pairs(self.0.iter().map(|&(i, v)| (i, v * factor)).collect())
    }

    pub fn to_dense(&self, len: usize) -> Vec<T> {
        let mut out = vec![T::zero(); len];
        for &(i, v) in &self.0 {
            if i < len {
                out[i] = v;
            }
        }
        out
    }

    /// Keeps only columns for which `keep` returns true.
    pub fn filter_columns(&self, keep: impl Fn(usize) -> bool) -> SparseVec<T> {
        SparseVec(self.0.iter().copied().filter(|&(i, _)| keep(i)).collect())
    }
}
