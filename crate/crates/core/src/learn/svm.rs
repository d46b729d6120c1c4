//! One-vs-rest linear SVM, L2-regularised hinge loss, trained by dual coordinate descent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{derive_seed, Dataset, SvmParams};
use crate::features::FeatureVector;
use crate::label::StanceLabel;
use crate::scalar::Scalar;

/// Binary classifier `sign(w·x + b·bias)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BinarySvm<T> {
    /// Feature weights followed by the bias weight.
    pub weights: Vec<T>,
    pub epochs: usize,
    pub converged: bool,
}

impl<T: Scalar> BinarySvm<T> {
    pub fn decision(&self, x: &FeatureVector<T>, bias: T) -> T {
        let d = self.weights.len() - 1;
        x.dot(&self.weights[..d]) + self.weights[d] * bias
    }

    /// Solves `min ½‖w‖² + C Σ max(0, 1 − yᵢ w·xᵢ)` over the box-constrained dual.
    ///
    /// Stops when the spread of projected gradients falls below `tol` or after
    /// `max_epochs` passes.
    pub fn fit(rows: &[&FeatureVector<T>], y: &[T], dim: usize, params: &SvmParams, seed: u64) -> Self {
        let c = T::of(params.c);
        let bias = T::of(params.bias);
        let tol = T::of(params.tol);
        let n = rows.len();
        let mut w = vec![T::zero(); dim + 1];
        let mut alpha = vec![T::zero(); n];
        let qii: Vec<T> = rows.iter().map(|x| x.squared_norm() + bias * bias).collect();
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut epochs = 0;
        let mut converged = false;

        while epochs < params.max_epochs {
            epochs += 1;
            order.shuffle(&mut rng);
            let mut pg_max = T::neg_infinity();
            let mut pg_min = T::infinity();
            for &i in &order {
                if qii[i] == T::zero() {
                    continue;
                }
                let x = rows[i];
                let g = y[i] * (x.dot(&w[..dim]) + w[dim] * bias) - T::one();
                let pg = if alpha[i] == T::zero() {
                    g.min(T::zero())
                } else if alpha[i] == c {
                    g.max(T::zero())
                } else {
                    g
                };
                pg_max = pg_max.max(pg);
                pg_min = pg_min.min(pg);
                if pg.abs() > T::epsilon() {
                    let old = alpha[i];
                    alpha[i] = (old - g / qii[i]).max(T::zero()).min(c);
                    let step = (alpha[i] - old) * y[i];
                    if step != T::zero() {
                        for (j, v) in x.iter() {
                            w[j] += step * v;
                        }
                        w[dim] += step * bias;
                    }
                }
            }
            if pg_max - pg_min <= tol || pg_max == T::neg_infinity() {
                converged = true;
                break;
            }
        }
        BinarySvm {
            weights: w,
            epochs,
            converged,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LinearSvm<T> {
    pub classes: Vec<StanceLabel>,
    pub machines: Vec<BinarySvm<T>>,
    pub bias: T,
}

impl<T: Scalar> LinearSvm<T> {
    pub fn fit(data: &Dataset<T>, params: &SvmParams, seed: u64) -> Self {
        let classes = data.classes();
        let rows: Vec<&FeatureVector<T>> = data.rows.iter().collect();
        let machines = classes
            .iter()
            .map(|c| {
                let y: Vec<T> = data
                    .labels
                    .iter()
                    .map(|l| if l == c { T::one() } else { -T::one() })
                    .collect();
                BinarySvm::fit(&rows, &y, data.dim, params, derive_seed(seed, c.index() as u64))
            })
            .collect();
        LinearSvm {
            classes,
            machines,
            bias: T::of(params.bias),
        }
    }

    /// One-vs-rest margins, in `classes` order.
    pub fn scores(&self, x: &FeatureVector<T>) -> Vec<T> {
        self.machines.iter().map(|m| m.decision(x, self.bias)).collect()
    }
}

/// `½‖w‖² + C Σ max(0, 1 − yᵢ f(xᵢ))`, with the bias weight regularised like the others.
pub fn primal_objective<T: Scalar>(m: &BinarySvm<T>, rows: &[&FeatureVector<T>], y: &[T], c: f64, bias: f64) -> T {
    let reg = T::of(0.5) * m.weights.iter().map(|&v| v * v).sum::<T>();
    let loss: T = rows
        .iter()
        .zip(y)
        .map(|(x, &yi)| (T::one() - yi * m.decision(x, T::of(bias))).max(T::zero()))
        .sum();
    reg + T::of(c) * loss
}
