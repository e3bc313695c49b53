//! Linear SVM: L2-regularised hinge loss solved by dual coordinate descent.
//!
//! The bias is learned as the weight of a constant feature equal to 1, so
//! it is regularised along with the other weights. Coordinates are visited
//! in a fresh seeded permutation each epoch. Training stops when the
//! duality gap falls to `tolerance` times the primal objective, or after
//! `max_epochs` passes.

use crate::rng::SeededRng;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, Copy)]
pub struct SolverParams {
    pub c: f64,
    pub tolerance: f64,
    pub max_epochs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub epochs: usize,
    pub converged: bool,
}

fn margin<T: Scalar>(w: &[T], bias: T, x: &SparseVec<T>) -> T {
    x.dot(w) + bias
}

fn objectives<T: Scalar>(w: &[T], bias: T, alpha: &[T], rows: &[SparseVec<T>], y: &[T], c: T) -> (T, T) {
    let half_norm = (w.iter().fold(T::zero(), |a, &v| a + v * v) + bias * bias) * T::half();
    let hinge =
        rows.iter().zip(y).fold(T::zero(), |acc, (x, &yi)| acc + (T::one() - yi * margin(w, bias, x)).max(T::zero()));
    let primal = half_norm + c * hinge;
    let dual = alpha.iter().fold(T::zero(), |a, &v| a + v) - half_norm;
    (primal, dual)
}

pub fn train_svm<T: Scalar>(rows: &[SparseVec<T>], labels: &[bool], dim: usize, params: &SolverParams) -> LinearFit<T> {
    let n = rows.len();
    let c = T::from_f64_lossy(params.c);
    let tol = T::from_f64_lossy(params.tolerance);
    let y: Vec<T> = labels.iter().map(|&l| if l { T::one() } else { -T::one() }).collect();
    let q_diag: Vec<T> = rows.iter().map(|x| x.norm_sq() + T::one()).collect();
    let mut alpha = vec![T::zero(); n];
    let mut w = vec![T::zero(); dim];
    let mut bias = T::zero();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SeededRng::new(params.seed);

    let mut epochs = 0;
    let mut converged = false;
    while epochs < params.max_epochs {
        epochs += 1;
        rng.shuffle(&mut order);
        for &i in &order {
            let g = y[i] * margin(&w, bias, &rows[i]) - T::one();
            let pg = if alpha[i] == T::zero() {
                g.min(T::zero())
            } else if alpha[i] == c {
                g.max(T::zero())
            } else {
                g
            };
            if pg == T::zero() {
                continue;
            }
            let old = alpha[i];
            alpha[i] = (old - g / q_diag[i]).max(T::zero()).min(c);
            let delta = (alpha[i] - old) * y[i];
            if delta != T::zero() {
                for (j, v) in rows[i].iter() {
                    w[j] = w[j] + delta * v;
                }
                bias = bias + delta;
            }
        }
        let (primal, dual) = objectives(&w, bias, &alpha, rows, &y, c);
        if primal - dual <= tol * primal.abs() {
            converged = true;
            break;
        }
    }
    log::debug!(
        "svm: n={n} dim={dim} C={} tol={} epochs={epochs} converged={converged} seed={}",
        params.c,
        params.tolerance,
        params.seed
    );
    LinearFit { weights: w, bias, epochs, converged }
}
