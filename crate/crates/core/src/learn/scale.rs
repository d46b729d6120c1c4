use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::features::FeatureVector;
use crate::scalar::Scalar;

/// Rescales selected columns to zero mean and unit variance; other columns pass through.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Standardizer<T> {
    pub columns: Vec<usize>,
    pub means: Vec<T>,
    pub scales: Vec<T>,
}

impl<T: Scalar> Standardizer<T> {
    /// Columns with zero variance keep a scale of one.
    pub fn fit(data: &Dataset<T>, columns: &[usize]) -> Self {
        let mut columns = columns.to_vec();
        columns.sort_unstable();
        columns.dedup();
        let n = T::of_usize(data.len().max(1));
        let mut means = Vec::with_capacity(columns.len());
        let mut scales = Vec::with_capacity(columns.len());
        for &j in &columns {
            let mean = data.rows.iter().map(|r| r.get(j)).sum::<T>() / n;
            let var = data
                .rows
                .iter()
                .map(|r| {
                    let d = r.get(j) - mean;
                    d * d
                })
                .sum::<T>()
                / n;
            let sd = var.sqrt();
            means.push(mean);
            scales.push(if sd > T::zero() { sd } else { T::one() });
        }
        Standardizer { columns, means, scales }
    }

    pub fn apply(&self, x: &FeatureVector<T>) -> FeatureVector<T> {
        let mut pairs: Vec<(usize, T)> = x
            .iter()
            .filter(|(j, _)| self.columns.binary_search(j).is_err())
            .collect();
        for (k, &j) in self.columns.iter().enumerate() {
            if j < x.dim() {
                pairs.push((j, (x.get(j) - self.means[k]) / self.scales[k]));
            }
        }
        FeatureVector::from_pairs(x.dim(), pairs)
    }
}
