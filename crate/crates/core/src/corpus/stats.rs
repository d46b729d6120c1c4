use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Corpus;
use crate::error::{Error, Result};
use crate::label::StanceLabel;

/// Gold label tallies, indexed by `StanceLabel::index`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub leave: usize,
    pub remain: usize,
    pub none: usize,
}

impl LabelCounts {
    pub fn add(&mut self, label: StanceLabel) {
        match label {
            StanceLabel::Leave => self.leave += 1,
            StanceLabel::Remain => self.remain += 1,
            StanceLabel::None => self.none += 1,
        }
    }

    pub fn get(&self, label: StanceLabel) -> usize {
        self.as_array()[label.index()]
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.leave, self.remain, self.none]
    }

    pub fn total(&self) -> usize {
        self.leave + self.remain + self.none
    }

    /// Fractions per label, or `None` when there is nothing to count.
    pub fn fractions(&self) -> Option<[f64; 3]> {
        let n = self.total();
        (n > 0).then(|| self.as_array().map(|c| c as f64 / n as f64))
    }
}

impl std::ops::AddAssign for LabelCounts {
    fn add_assign(&mut self, o: Self) {
        self.leave += o.leave;
        self.remain += o.remain;
        self.none += o.none;
    }
}

/// Gold label distribution, over the whole corpus or restricted to one window.
pub fn label_distribution(corpus: &Corpus, window: Option<usize>) -> LabelCounts {
    let mut counts = LabelCounts::default();
    for t in corpus.gold_triplets() {
        if window.is_none_or(|w| t.window == w) {
            counts.add(t.gold.expect("gold triplet"));
        }
    }
    counts
}

/// One label per window, in window order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trajectory(pub Vec<StanceLabel>);

impl Trajectory {
    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|p| p[0] == p[1])
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{}", l.code())?;
        }
        Ok(())
    }
}

impl FromStr for Trajectory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split('-')
            .map(|c| match c {
                "L" => Ok(StanceLabel::Leave),
                "R" => Ok(StanceLabel::Remain),
                "N" => Ok(StanceLabel::None),
                other => Err(Error::Parse(format!("bad trajectory element `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Trajectory)
    }
}

impl Serialize for Trajectory {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Trajectory {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TransitionTable {
    pub counts: BTreeMap<Trajectory, usize>,
    pub fractions: BTreeMap<Trajectory, f64>,
    pub included_users: usize,
    /// Users with at least one triplet in full disagreement.
    pub excluded_users: Vec<String>,
}

impl TransitionTable {
    /// Fraction of included users whose label never changes.
    pub fn stable_fraction(&self) -> f64 {
        self.fractions
            .iter()
            .filter(|(t, _)| t.is_constant())
            .map(|(_, f)| f)
            .sum()
    }

    pub fn fraction(&self, labels: &[StanceLabel]) -> f64 {
        self.fractions.get(&Trajectory(labels.to_vec())).copied().unwrap_or(0.0)
    }
}

/// Distribution of per-user label trajectories across the configured windows.
pub fn stance_transitions(corpus: &Corpus) -> Result<TransitionTable> {
    let n_windows = corpus.windows.len();
    let mut per_user: BTreeMap<&str, Vec<Option<Option<StanceLabel>>>> = BTreeMap::new();
    for t in &corpus.triplets {
        let slots = per_user
            .entry(t.user_id.as_str())
            .or_insert_with(|| vec![None; n_windows]);
        if t.window >= n_windows || slots[t.window].is_some() {
            return Err(Error::Corpus(format!(
                "user `{}` does not have exactly one triplet per window",
                t.user_id
            )));
        }
        slots[t.window] = Some(t.gold);
    }

    let mut table = TransitionTable::default();
    let mut excluded = BTreeSet::new();
    for (user, slots) in per_user {
        if slots.iter().any(Option::is_none) {
            return Err(Error::Corpus(format!(
                "user `{user}` has {} of {n_windows} windows",
                slots.iter().filter(|s| s.is_some()).count()
            )));
        }
        let labels: Option<Vec<StanceLabel>> = slots.into_iter().map(|s| s.flatten()).collect();
        match labels {
            Some(labels) => *table.counts.entry(Trajectory(labels)).or_default() += 1,
            None => {
                excluded.insert(user.to_string());
            }
        }
    }
    table.included_users = table.counts.values().sum();
    table.excluded_users = excluded.into_iter().collect();
    if table.included_users > 0 {
        let n = table.included_users as f64;
        table.fractions = table.counts.iter().map(|(k, &c)| (k.clone(), c as f64 / n)).collect();
    }
    Ok(table)
}

/// Mean triplet confidence per window, on a 0–100 scale.
pub fn agreement_by_window(corpus: &Corpus) -> Result<Vec<f64>> {
    let mut sums = vec![0.0; corpus.windows.len()];
    let mut counts = vec![0usize; corpus.windows.len()];
    for t in &corpus.triplets {
        let c = t
            .confidence
            .ok_or_else(|| Error::AgreementUnavailable(format!("triplet `{}` has no confidence", t.id())))?;
        sums[t.window] += c;
        counts[t.window] += 1;
    }
    corpus
        .windows
        .iter()
        .map(|w| {
            if counts[w.id] == 0 {
                Err(Error::AgreementUnavailable(format!(
                    "window `{}` has no triplets",
                    w.name
                )))
            } else {
                Ok(100.0 * sums[w.id] / counts[w.id] as f64)
            }
        })
        .collect()
}
