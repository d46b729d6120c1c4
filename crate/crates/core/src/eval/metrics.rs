use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::label::StanceLabel;

/// Gold × predicted counts, rows and columns in label order (Leave, Remain, None).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub counts: [[usize; 3]; 3],
}

impl ConfusionCounts {
    pub fn from_matrix(counts: [[usize; 3]; 3]) -> Self {
        ConfusionCounts { counts }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (StanceLabel, StanceLabel)>) -> Self {
        let mut c = ConfusionCounts::default();
        for (gold, predicted) in pairs {
            c.add(gold, predicted);
        }
        c
    }

    pub fn add(&mut self, gold: StanceLabel, predicted: StanceLabel) {
        self.counts[gold.index()][predicted.index()] += 1;
    }

    pub fn get(&self, gold: StanceLabel, predicted: StanceLabel) -> usize {
        self.counts[gold.index()][predicted.index()]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.correct(), self.total())
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..3 {
            for j in 0..3 {
                self.counts[i][j] += rhs.counts[i][j];
            }
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub label: StanceLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold instances of this label.
    pub support: usize,
}

/// Precision, recall and F1 per label; a zero denominator yields 0.
pub fn f1_per_class(c: &ConfusionCounts) -> [ClassScores; 3] {
    StanceLabel::ALL.map(|l| {
        let i = l.index();
        let tp = c.counts[i][i];
        let predicted: usize = (0..3).map(|g| c.counts[g][i]).sum();
        let gold: usize = c.counts[i].iter().sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, gold);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassScores {
            label: l,
            precision,
            recall,
            f1,
            support: gold,
        }
    })
}

/// Mean of the Leave and Remain F1 scores; None is left out.
pub fn f_avg(scores: &[ClassScores; 3]) -> f64 {
    (scores[StanceLabel::Leave.index()].f1 + scores[StanceLabel::Remain.index()].f1) / 2.0
}

/// `100·x` rounded half-up to two decimals.
pub fn percent(x: f64) -> String {
    let v = ((x * 100.0 * 100.0) + 0.5 + 1e-9).floor() / 100.0;
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.2}")
}
