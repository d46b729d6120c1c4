use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::label::StanceLabel;
use crate::scalar::Scalar;

/// Gaussian naive Bayes with per-class, per-feature mean and variance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GaussianNb<T> {
    pub classes: Vec<StanceLabel>,
    pub log_priors: Vec<T>,
    pub means: Vec<Vec<T>>,
    pub variances: Vec<Vec<T>>,
    /// Per class: `Σ_j log(2π σ²) + μ²/σ²`, the score of the all-zero vector.
    base: Vec<T>,
}

impl<T: Scalar> GaussianNb<T> {
    /// `var_smoothing` is added to every variance as a fraction of the largest feature
    /// variance over the whole training set.
    pub fn fit(data: &Dataset<T>, var_smoothing: f64) -> Result<Self> {
        let classes = data.classes();
        let d = data.dim;
        let n = T::of_usize(data.len());

        let mut epsilon = T::zero();
        let all: Vec<usize> = (0..data.len()).collect();
        let (_, total_var) = moments(data, &all);
        for v in total_var {
            epsilon = epsilon.max(v);
        }
        epsilon = T::of(var_smoothing) * epsilon;
        if epsilon == T::zero() {
            epsilon = T::of(var_smoothing);
        }

        let two_pi = T::of(std::f64::consts::TAU);
        let mut out = GaussianNb {
            classes: classes.clone(),
            log_priors: Vec::new(),
            means: Vec::new(),
            variances: Vec::new(),
            base: Vec::new(),
        };
        for c in &classes {
            let rows: Vec<usize> = (0..data.len()).filter(|&i| data.labels[i] == *c).collect();
            let (mean, mut var) = moments(data, &rows);
            for v in var.iter_mut() {
                *v += epsilon;
            }
            let base = (0..d)
                .map(|j| (two_pi * var[j]).ln() + mean[j] * mean[j] / var[j])
                .sum();
            out.log_priors.push((T::of_usize(rows.len()) / n).ln());
            out.means.push(mean);
            out.variances.push(var);
            out.base.push(base);
        }
        Ok(out)
    }

    /// Joint log-likelihood `log P(c) + log P(x | c)` per class.
    pub fn joint_log_likelihood(&self, x: &FeatureVector<T>) -> Vec<T> {
        let half = T::of(0.5);
        (0..self.classes.len())
            .map(|k| {
                let (mu, var) = (&self.means[k], &self.variances[k]);
                let adj: T = x.iter().map(|(j, v)| (v * v - (v + v) * mu[j]) / var[j]).sum();
                self.log_priors[k] - half * (self.base[k] + adj)
            })
            .collect()
    }

    /// Posterior probability per class, in `classes` order.
    pub fn posterior(&self, x: &FeatureVector<T>) -> Vec<T> {
        softmax(&self.joint_log_likelihood(x))
    }
}

/// Multinomial naive Bayes with Laplace/Lidstone smoothing; features must be non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MultinomialNb<T> {
    pub classes: Vec<StanceLabel>,
    pub log_priors: Vec<T>,
    pub log_probs: Vec<Vec<T>>,
}

impl<T: Scalar> MultinomialNb<T> {
    pub fn fit(data: &Dataset<T>, alpha: f64) -> Result<Self> {
        let classes = data.classes();
        let alpha = T::of(alpha);
        let n = T::of_usize(data.len());
        let mut out = MultinomialNb {
            classes: classes.clone(),
            log_priors: Vec::new(),
            log_probs: Vec::new(),
        };
        for c in &classes {
            let mut counts = vec![alpha; data.dim];
            let mut n_c = 0usize;
            for (row, l) in data.rows.iter().zip(&data.labels) {
                if l != c {
                    continue;
                }
                n_c += 1;
                for (j, v) in row.iter() {
                    if v < T::zero() {
                        return Err(Error::Training(
                            "multinomial naive Bayes needs non-negative features".into(),
                        ));
                    }
                    counts[j] += v;
                }
            }
            let total: T = counts.iter().copied().sum();
            out.log_priors.push((T::of_usize(n_c) / n).ln());
            out.log_probs
                .push(counts.into_iter().map(|v| (v / total).ln()).collect());
        }
        Ok(out)
    }

    pub fn joint_log_likelihood(&self, x: &FeatureVector<T>) -> Vec<T> {
        (0..self.classes.len())
            .map(|k| self.log_priors[k] + x.dot(&self.log_probs[k]))
            .collect()
    }
}

fn softmax<T: Scalar>(v: &[T]) -> Vec<T> {
    let max = v.iter().copied().fold(T::neg_infinity(), T::max);
    let exp: Vec<T> = v.iter().map(|&x| (x - max).exp()).collect();
    let sum: T = exp.iter().copied().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

/// Per-column mean and population variance over `rows`, treating absent entries as zero.
fn moments<T: Scalar>(data: &Dataset<T>, rows: &[usize]) -> (Vec<T>, Vec<T>) {
    let d = data.dim;
    let n = T::of_usize(rows.len().max(1));
    let mut mean = vec![T::zero(); d];
    let mut nnz = vec![0usize; d];
    for &i in rows {
        for (j, v) in data.rows[i].iter() {
            mean[j] += v;
            nnz[j] += 1;
        }
    }
    for m in mean.iter_mut() {
        *m /= n;
    }
    let mut ss = vec![T::zero(); d];
    for &i in rows {
        for (j, v) in data.rows[i].iter() {
            let dv = v - mean[j];
            ss[j] += dv * dv;
        }
    }
    let var = (0..d)
        .map(|j| (ss[j] + T::of_usize(rows.len() - nnz[j]) * mean[j] * mean[j]) / n)
        .collect();
    (mean, var)
}
