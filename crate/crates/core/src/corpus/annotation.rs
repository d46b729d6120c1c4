use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::StanceLabel;

/// Outcome of majority voting over crowd judgments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aggregate {
    Gold(StanceLabel),
    /// Two judgments that disagree; a third contributor is required.
    NeedsThirdJudgment,
    /// Three judgments, all different; the triplet leaves the gold corpus.
    Disagreement,
}

/// Majority vote over two or three judgments.
pub fn aggregate_annotations(judgments: &[StanceLabel]) -> Result<Aggregate> {
    if !(2..=3).contains(&judgments.len()) {
        return Err(Error::Annotation(format!(
            "expected 2 or 3 judgments, got {}",
            judgments.len()
        )));
    }
    let mut counts = [0usize; 3];
    for l in judgments {
        counts[l.index()] += 1;
    }
    if let Some(i) = counts.iter().position(|&c| c >= 2) {
        return Ok(Aggregate::Gold(StanceLabel::ALL[i]));
    }
    Ok(if judgments.len() == 2 {
        Aggregate::NeedsThirdJudgment
    } else {
        Aggregate::Disagreement
    })
}
