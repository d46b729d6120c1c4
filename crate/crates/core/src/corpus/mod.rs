//! Diachronic triplet corpus: time windows, tweets, annotated triplets and their statistics.

mod annotation;
mod io;
mod stats;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::StanceLabel;

pub use annotation::{aggregate_annotations, Aggregate};
pub use io::{load_corpus, write_corpus, CorpusSource, JsonlSource};
pub use stats::{
    agreement_by_window, label_distribution, stance_transitions, LabelCounts, Trajectory, TransitionTable,
};

/// A half-open `[start, end)` interval of UTC time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub id: usize,
    pub name: String,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn contains(&self, t: &DateTime<Utc>) -> bool {
        *t >= self.start && *t < self.end
    }
}

/// The three 24-hour windows around the 2016 referendum: polling day up to the close of
/// polls (RD), the day after the result was declared (OD), and the day after sterling fell
/// (APF).
pub fn default_windows() -> Vec<TimeWindow> {
    let at = |d: u32, h: u32| Utc.with_ymd_and_hms(2016, 6, d, h, 0, 0).unwrap();
    vec![
        TimeWindow {
            id: 0,
            name: "RD".into(),
            start: at(22, 21),
            end: at(23, 21),
        },
        TimeWindow {
            id: 1,
            name: "OD".into(),
            start: at(24, 7),
            end: at(25, 7),
        },
        TimeWindow {
            id: 2,
            name: "APF".into(),
            start: at(27, 7),
            end: at(28, 7),
        },
    ]
}

/// Checks that windows are non-empty intervals, ordered by start and pairwise disjoint,
/// and renumbers their ids to match their position.
pub fn validate_windows(mut windows: Vec<TimeWindow>) -> Result<Vec<TimeWindow>> {
    if windows.is_empty() {
        return Err(Error::Corpus("no time windows configured".into()));
    }
    for (i, w) in windows.iter_mut().enumerate() {
        if w.start >= w.end {
            return Err(Error::Corpus(format!("window `{}` has start >= end", w.name)));
        }
        w.id = i;
    }
    for pair in windows.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(Error::Corpus(format!(
                "windows `{}` and `{}` overlap or are out of order",
                pair[0].name, pair[1].name
            )));
        }
    }
    Ok(windows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub tweet_id: String,
    pub user_id: String,
    pub text: String,
    pub timestamp: DateTime<Utc>,
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub worker: String,
    pub label: StanceLabel,
}

/// Three tweets by one user in one window, with crowd judgments and the aggregated label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub user_id: String,
    pub window: usize,
    pub tweet_ids: [String; 3],
    pub judgments: Vec<Judgment>,
    /// Majority label; `None` when all three judgments differ.
    pub gold: Option<StanceLabel>,
    /// Annotator agreement in `[0, 1]`, when the source provides it.
    pub confidence: Option<f64>,
}

impl Triplet {
    pub fn id(&self) -> String {
        format!("{}@{}", self.user_id, self.window)
    }
}

/// Raw records as read from a corpus source, before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawTweet {
    pub tweet_id: String,
    pub user_id: String,
    pub text: String,
    pub timestamp: DateTime<Utc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawTriplet {
    pub user_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    pub tweet_ids: Vec<String>,
    pub judgments: Vec<Judgment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawWindow {
    pub name: String,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl From<&TimeWindow> for RawWindow {
    fn from(w: &TimeWindow) -> Self {
        RawWindow {
            name: w.name.clone(),
            start: w.start,
            end: w.end,
        }
    }
}

/// Validated, immutable corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub windows: Vec<TimeWindow>,
    pub tweets: BTreeMap<String, Tweet>,
    pub triplets: Vec<Triplet>,
    pub users: BTreeSet<String>,
}

impl Corpus {
    /// Validates raw records and resolves all cross references.
    pub fn assemble(
        windows: Vec<TimeWindow>,
        raw_tweets: Vec<RawTweet>,
        raw_triplets: Vec<RawTriplet>,
    ) -> Result<Corpus> {
        let windows = validate_windows(windows)?;

        let mut tweets = BTreeMap::new();
        for t in raw_tweets {
            if t.text.trim().is_empty() {
                return Err(Error::Corpus(format!("tweet `{}` has empty text", t.tweet_id)));
            }
            let window = windows
                .iter()
                .find(|w| w.contains(&t.timestamp))
                .map(|w| w.id)
                .ok_or_else(|| Error::OutsideWindows {
                    tweet_id: t.tweet_id.clone(),
                    timestamp: t.timestamp.to_rfc3339(),
                })?;
            let id = t.tweet_id.clone();
            let tweet = Tweet {
                tweet_id: t.tweet_id,
                user_id: t.user_id,
                text: t.text,
                timestamp: t.timestamp,
                window,
            };
            if tweets.insert(id.clone(), tweet).is_some() {
                return Err(Error::Corpus(format!("duplicate tweet id `{id}`")));
            }
        }

        let mut seen = BTreeSet::new();
        let mut triplets = Vec::with_capacity(raw_triplets.len());
        for raw in raw_triplets {
            let triplet = resolve_triplet(raw, &tweets, windows.len())?;
            if !seen.insert((triplet.user_id.clone(), triplet.window)) {
                return Err(Error::Corpus(format!(
                    "user `{}` has more than one triplet in window {}",
                    triplet.user_id, triplet.window
                )));
            }
            triplets.push(triplet);
        }

        let users: BTreeSet<String> = triplets.iter().map(|t| t.user_id.clone()).collect();
        for user in &users {
            for w in &windows {
                if !seen.contains(&(user.clone(), w.id)) {
                    return Err(Error::Corpus(format!(
                        "user `{user}` has no triplet in window `{}`",
                        w.name
                    )));
                }
            }
        }

        Ok(Corpus {
            windows,
            tweets,
            triplets,
            users,
        })
    }

    pub fn empty(windows: Vec<TimeWindow>) -> Result<Corpus> {
        Corpus::assemble(windows, Vec::new(), Vec::new())
    }

    pub fn gold_triplets(&self) -> impl Iterator<Item = &Triplet> + '_ {
        self.triplets.iter().filter(|t| t.gold.is_some())
    }

    /// Triplets excluded from the gold corpus because every judgment differs.
    pub fn disagreement_count(&self) -> usize {
        self.triplets.iter().filter(|t| t.gold.is_none()).count()
    }

    pub fn tweet(&self, id: &str) -> Option<&Tweet> {
        self.tweets.get(id)
    }

    /// Texts of a triplet's tweets, in triplet order.
    pub fn triplet_texts<'a>(&'a self, triplet: &'a Triplet) -> impl Iterator<Item = &'a str> + 'a {
        triplet.tweet_ids.iter().map(move |id| self.tweets[id].text.as_str())
    }

    pub fn window_by_name(&self, name: &str) -> Option<&TimeWindow> {
        self.windows.iter().find(|w| w.name == name)
    }
}

fn resolve_triplet(raw: RawTriplet, tweets: &BTreeMap<String, Tweet>, n_windows: usize) -> Result<Triplet> {
    let ids: [String; 3] = raw.tweet_ids.clone().try_into().map_err(|v: Vec<String>| {
        Error::Corpus(format!(
            "triplet of user `{}` has {} tweet ids, expected 3",
            raw.user_id,
            v.len()
        ))
    })?;
    if ids[0] == ids[1] || ids[0] == ids[2] || ids[1] == ids[2] {
        return Err(Error::Corpus(format!(
            "triplet of user `{}` repeats a tweet id",
            raw.user_id
        )));
    }
    let mut window = raw.window;
    for id in &ids {
        let tweet = tweets.get(id).ok_or_else(|| Error::MissingTweet(id.clone()))?;
        if tweet.user_id != raw.user_id {
            return Err(Error::Corpus(format!(
                "tweet `{id}` belongs to `{}`, not to triplet user `{}`",
                tweet.user_id, raw.user_id
            )));
        }
        match window {
            None => window = Some(tweet.window),
            Some(w) if w != tweet.window => {
                return Err(Error::Corpus(format!(
                    "tweet `{id}` lies in window {}, triplet of user `{}` is in window {w}",
                    tweet.window, raw.user_id
                )))
            }
            Some(_) => {}
        }
    }
    let window = window.expect("three tweets resolved");
    if window >= n_windows {
        return Err(Error::Corpus(format!("window index {window} out of range")));
    }
    if let Some(c) = raw.confidence {
        if !(0.0..=1.0).contains(&c) || c.is_nan() {
            return Err(Error::Corpus(format!(
                "confidence {c} of triplet `{}@{window}` outside [0, 1]",
                raw.user_id
            )));
        }
    }
    let labels: Vec<StanceLabel> = raw.judgments.iter().map(|j| j.label).collect();
    let gold = match aggregate_annotations(&labels)? {
        Aggregate::Gold(l) => Some(l),
        Aggregate::Disagreement => None,
        Aggregate::NeedsThirdJudgment => {
            return Err(Error::Annotation(format!(
                "triplet `{}@{window}` has two disagreeing judgments and no third",
                raw.user_id
            )))
        }
    };
    Ok(Triplet {
        user_id: raw.user_id,
        window,
        tweet_ids: ids,
        judgments: raw.judgments,
        gold,
        confidence: raw.confidence,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Duration;
    use StanceLabel::{Leave as L, Remain as R};

    fn raw(user: &str, window: &TimeWindow, prefix: &str) -> (Vec<RawTweet>, Vec<String>) {
        let mut out = Vec::new();
        let mut ids = Vec::new();
        for k in 0..3 {
            let id = format!("{prefix}{k}");
            out.push(RawTweet {
                tweet_id: id.clone(),
                user_id: user.into(),
                text: "hello".into(),
                timestamp: window.start + Duration::seconds(k),
            });
            ids.push(id);
        }
        (out, ids)
    }

    #[test]
    fn two_users_three_windows() {
        let c = fixtures::corpus_with_labels(&[&[L, L, L], &[R, R, L]]);
        assert_eq!(c.triplets.len(), 6);
        assert_eq!(c.tweets.len(), 18);
        assert_eq!(c.users.len(), 2);
    }

    #[test]
    fn missing_tweet_is_named() {
        let windows = vec![default_windows().remove(0)];
        let (tweets, mut ids) = raw("u", &windows[0], "a");
        ids[2] = "ghost".into();
        let trip = RawTriplet {
            user_id: "u".into(),
            window: None,
            tweet_ids: ids,
            judgments: vec![
                Judgment {
                    worker: "x".into(),
                    label: L,
                },
                Judgment {
                    worker: "y".into(),
                    label: L,
                },
            ],
            confidence: None,
        };
        let err = Corpus::assemble(windows, tweets, vec![trip]).unwrap_err();
        assert!(err.to_string().contains("ghost"), "{err}");
    }

    #[test]
    fn tweet_outside_windows_is_an_error() {
        let windows = default_windows();
        let t = RawTweet {
            tweet_id: "x".into(),
            user_id: "u".into(),
            text: "hi".into(),
            timestamp: windows[2].end + Duration::hours(1),
        };
        assert!(matches!(
            Corpus::assemble(windows, vec![t], vec![]),
            Err(Error::OutsideWindows { .. })
        ));
    }

    #[test]
    fn window_is_derived_from_timestamps() {
        let windows = default_windows();
        let (tweets, ids) = raw("u", &windows[1], "b");
        let trip = RawTriplet {
            user_id: "u".into(),
            window: None,
            tweet_ids: ids,
            judgments: vec![
                Judgment {
                    worker: "x".into(),
                    label: R,
                },
                Judgment {
                    worker: "y".into(),
                    label: R,
                },
            ],
            confidence: Some(0.5),
        };
        let one = vec![windows[1].clone()];
        let c = Corpus::assemble(one, tweets, vec![trip]).unwrap();
        assert_eq!(c.triplets[0].window, 0);
        assert_eq!(c.triplets[0].gold, Some(R));
    }

    #[test]
    fn two_disagreeing_judgments_are_rejected() {
        let windows = vec![default_windows().remove(0)];
        let (tweets, ids) = raw("u", &windows[0], "c");
        let trip = RawTriplet {
            user_id: "u".into(),
            window: Some(0),
            tweet_ids: ids,
            judgments: vec![
                Judgment {
                    worker: "x".into(),
                    label: L,
                },
                Judgment {
                    worker: "y".into(),
                    label: R,
                },
            ],
            confidence: None,
        };
        assert!(matches!(
            Corpus::assemble(windows, tweets, vec![trip]),
            Err(Error::Annotation(_))
        ));
    }

    #[test]
    fn overlapping_windows_are_rejected() {
        let mut w = default_windows();
        w[1].start = w[0].start;
        assert!(validate_windows(w).is_err());
    }
}
