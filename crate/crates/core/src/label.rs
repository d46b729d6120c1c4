use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stance of a user towards the UK leaving the EU.
///
/// The derived order (`Leave < Remain < None`) is the tie-breaking order used everywhere a
/// choice between labels must be made deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StanceLabel {
    Leave,
    Remain,
    None,
}

impl StanceLabel {
    pub const ALL: [StanceLabel; 3] = [StanceLabel::Leave, StanceLabel::Remain, StanceLabel::None];

    pub fn index(self) -> usize {
        match self {
            StanceLabel::Leave => 0,
            StanceLabel::Remain => 1,
            StanceLabel::None => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::Leave => "leave",
            StanceLabel::Remain => "remain",
            StanceLabel::None => "none",
        }
    }

    /// One-letter code used in trajectory keys (`L`, `R`, `N`).
    pub fn code(self) -> char {
        match self {
            StanceLabel::Leave => 'L',
            StanceLabel::Remain => 'R',
            StanceLabel::None => 'N',
        }
    }
}

impl fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StanceLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "leave" | "favor" | "favour" => Ok(StanceLabel::Leave),
            "remain" | "against" => Ok(StanceLabel::Remain),
            "none" | "neutral" => Ok(StanceLabel::None),
            other => Err(Error::Parse(format!("unknown stance label `{other}`"))),
        }
    }
}

/// Index of the largest count; ties resolve to the earliest label.
pub fn argmax_label(counts: &[usize; 3]) -> StanceLabel {
    let mut best = 0;
    for i in 1..3 {
        if counts[i] > counts[best] {
            best = i;
        }
    }
    StanceLabel::ALL[best]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_leave_remain_none() {
        let mut v = vec![StanceLabel::None, StanceLabel::Leave, StanceLabel::Remain];
        v.sort();
        assert_eq!(v, StanceLabel::ALL.to_vec());
    }

    #[test]
    fn parses_and_prints() {
        for l in StanceLabel::ALL {
            assert_eq!(l.as_str().parse::<StanceLabel>().unwrap(), l);
        }
        assert!("maybe".parse::<StanceLabel>().is_err());
        assert_eq!(serde_json::to_string(&StanceLabel::Remain).unwrap(), "\"remain\"");
    }

    #[test]
    fn argmax_ties_break_to_first() {
        assert_eq!(argmax_label(&[1, 1, 1]), StanceLabel::Leave);
        assert_eq!(argmax_label(&[0, 2, 2]), StanceLabel::Remain);
        assert_eq!(argmax_label(&[0, 0, 3]), StanceLabel::None);
    }
}
