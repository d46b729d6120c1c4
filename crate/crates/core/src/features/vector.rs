use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Sparse vector with sorted, unique column indices and no stored zeros.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FeatureVector<T> {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> FeatureVector<T> {
    pub fn zeros(dim: usize) -> Self {
        FeatureVector {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(column, value)` pairs in any order; duplicate columns are summed.
    ///
    /// Panics if a column is out of bounds.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut pairs: Vec<(usize, T)> = pairs.into_iter().collect();
        pairs.sort_by_key(|p| p.0);
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values: Vec<T> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            assert!(i < dim, "column {i} out of bounds for dimension {dim}");
            if indices.last() == Some(&i) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(i);
                values.push(v);
            }
        }
        let mut out = FeatureVector { dim, indices, values };
        out.prune();
        out
    }

    pub fn from_dense(values: &[T]) -> Self {
        Self::from_pairs(values.len(), values.iter().copied().enumerate())
    }

    fn prune(&mut self) {
        let mut k = 0;
        for j in 0..self.indices.len() {
            if self.values[j] != T::zero() {
                self.indices[k] = self.indices[j];
                self.values[k] = self.values[j];
                k += 1;
            }
        }
        self.indices.truncate(k);
        self.values.truncate(k);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, col: usize) -> T {
        match self.indices.binary_search(&col) {
            Ok(k) => self.values[k],
            Err(_) => T::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    pub fn dot(&self, dense: &[T]) -> T {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    /// Sum of values in `start..end`.
    pub fn range_sum(&self, start: usize, end: usize) -> T {
        self.iter()
            .filter(|(i, _)| (start..end).contains(i))
            .map(|(_, v)| v)
            .sum()
    }

    pub fn squared_norm(&self) -> T {
        self.values.iter().map(|&v| v * v).sum()
    }

    /// Applies `f(column, value)` to every stored value, dropping results that are zero.
    pub fn map_values(&self, mut f: impl FnMut(usize, T) -> T) -> Self {
        Self::from_pairs(self.dim, self.iter().map(|(i, v)| (i, f(i, v))))
    }
}
