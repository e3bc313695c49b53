//! L2-regularised logistic regression, minimised with L-BFGS.
//!
//! Objective: `0.5 * |w|^2 + C * sum(log(1 + exp(-y * (w.x + b))))` with the
//! bias regularised as a constant feature. Stops when the gradient norm drops
//! below `tolerance` times its initial value, or after `max_epochs`
//! iterations.

use std::collections::VecDeque;

use super::svm::{LinearFit, SolverParams};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

fn log1p_exp<T: Scalar>(z: T) -> T {
    if z > T::zero() {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

struct Problem<'a, T> {
    rows: &'a [SparseVec<T>],
    y: Vec<T>,
    c: T,
    dim: usize,
}

impl<T: Scalar> Problem<'_, T> {
    /// Value and gradient; the last coordinate of `w` is the bias.
    fn eval(&self, w: &[T]) -> (T, Vec<T>) {
        let (weights, bias) = (&w[..self.dim], w[self.dim]);
        let mut f = w.iter().fold(T::zero(), |a, &v| a + v * v) * T::half();
        let mut g = w.to_vec();
        for (x, &yi) in self.rows.iter().zip(&self.y) {
            let m = yi * (x.dot(weights) + bias);
            f = f + self.c * log1p_exp(-m);
            let coef = -self.c * yi * sigmoid(-m);
            for (j, v) in x.iter() {
                g[j] = g[j] + coef * v;
            }
            g[self.dim] = g[self.dim] + coef;
        }
        (f, g)
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

const MEMORY: usize = 10;

pub fn train_logistic<T: Scalar>(
    rows: &[SparseVec<T>],
    labels: &[bool],
    dim: usize,
    params: &SolverParams,
) -> LinearFit<T> {
    let problem = Problem {
        rows,
        y: labels.iter().map(|&l| if l { T::one() } else { -T::one() }).collect(),
        c: T::from_f64_lossy(params.c),
        dim,
    };
    let tol = T::from_f64_lossy(params.tolerance);
    let mut w = vec![T::zero(); dim + 1];
    let (mut f, mut g) = problem.eval(&w);
    let g0 = dot(&g, &g).sqrt().max(T::one());
    let mut history: VecDeque<(Vec<T>, Vec<T>, T)> = VecDeque::with_capacity(MEMORY);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_epochs {
        if dot(&g, &g).sqrt() <= tol * g0 {
            converged = true;
            break;
        }
        iterations += 1;

        // Two-loop recursion for the search direction.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, yv, rho) in history.iter().rev() {
            let a = *rho * dot(s, &q);
            for (qi, &yi) in q.iter_mut().zip(yv) {
                *qi = *qi - a * yi;
            }
            alphas.push(a);
        }
        let gamma = history
            .back()
            .map_or_else(|| T::one() / dot(&g, &g).sqrt().max(T::epsilon()), |(s, yv, _)| dot(s, yv) / dot(yv, yv));
        for qi in q.iter_mut() {
            *qi = *qi * gamma;
        }
        for ((s, yv, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
            let b = *rho * dot(yv, &q);
            for (qi, &si) in q.iter_mut().zip(s) {
                *qi = *qi + (a - b) * si;
            }
        }
        let direction: Vec<T> = q.into_iter().map(|v| -v).collect();
        let slope = dot(&g, &direction);
        if slope >= T::zero() {
            history.clear();
            continue;
        }

        // Backtracking line search (Armijo).
        let mut step = T::one();
        let c1 = T::from_f64_lossy(1e-4);
        let (w_new, f_new, g_new) = loop {
            let cand: Vec<T> = w.iter().zip(&direction).map(|(&wi, &di)| wi + step * di).collect();
            let (fc, gc) = problem.eval(&cand);
            if fc <= f + c1 * step * slope || step < T::from_f64_lossy(1e-12) {
                break (cand, fc, gc);
            }
            step = step * T::half();
        };
        let s: Vec<T> = w_new.iter().zip(&w).map(|(&a, &b)| a - b).collect();
        let yv: Vec<T> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > T::epsilon() {
            if history.len() == MEMORY {
                history.pop_front();
            }
            history.push_back((s, yv, T::one() / sy));
        }
        let improvement = f - f_new;
        w = w_new;
        f = f_new;
        g = g_new;
        if improvement <= T::zero() {
            break;
        }
    }
    log::debug!(
        "logistic: n={} dim={dim} C={} tol={} iterations={iterations} converged={converged}",
        rows.len(),
        params.c,
        params.tolerance
    );
    let bias = w[dim];
    w.truncate(dim);
    LinearFit { weights: w, bias, epochs: iterations, converged }
}
