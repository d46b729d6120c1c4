//! Synthetic corpora with planted structure.
//!
//! Users are split into communities of a stochastic block model follower graph. Each
//! community has its own stance distribution for the first window; later windows follow
//! per-transition drift matrices. Tweets are bags of tokens mixing explicit stance words,
//! party and politician aliases, lexicon words and neutral filler at configurable rates.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::Duration;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{default_windows, write_corpus, Corpus, Judgment, RawTriplet, RawTweet, TimeWindow};
use crate::error::{Error, Result};
use crate::features::LexiconSet;
use crate::graph::write_edges_tsv;
use crate::knowledge::{PartyRecord, PoliticianRecord};
use crate::label::StanceLabel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    /// Annotated (seed) users.
    pub n_users: usize,
    /// Extra accounts that only appear in the follower graph.
    pub n_friends: usize,
    pub n_communities: usize,
    /// Tie probability within a community.
    pub p_in: f64,
    /// Tie probability across communities.
    pub p_out: f64,
    /// Share of ties that are mutual follows.
    pub mutual_fraction: f64,
    /// Share of seed users left without any tie.
    pub isolated_fraction: f64,
    /// Stance distribution of each community in the first window, in label order. Rows
    /// are reused cyclically when there are more communities than rows.
    pub community_stance: Vec<[f64; 3]>,
    /// Row `a` of matrix `t` is the distribution of the stance in window `t + 1` given
    /// stance `a` in window `t`.
    pub drift: Vec<[[f64; 3]; 3]>,
    pub tokens_per_tweet: usize,
    /// Per-token probability of an explicit stance word.
    pub stance_word_rate: f64,
    /// Probability that an emitted stance word matches the user's stance.
    pub stance_word_fidelity: f64,
    /// Per-token probability of a party or politician alias.
    pub entity_rate: f64,
    /// Probability that a mentioned entity's stance matches the user's stance.
    pub entity_fidelity: f64,
    /// Per-token probability of a sentiment lexicon word.
    pub sentiment_rate: f64,
    /// Probability that a Leave tweet's sentiment word is positive (and a Remain tweet's
    /// negative); None tweets draw either with equal probability.
    pub sentiment_bias: f64,
    pub hashtag_rate: f64,
    pub mention_rate: f64,
    pub judgments: usize,
    /// Probability that an annotator reports the planted stance.
    pub annotator_accuracy: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let stay = |s: f64| {
            let o = (1.0 - s) / 2.0;
            [[s, o, o], [o, s, o], [o, o, s]]
        };
        SynthConfig {
            seed: 7,
            n_users: 600,
            n_friends: 400,
            n_communities: 4,
            p_in: 0.06,
            p_out: 0.003,
            mutual_fraction: 0.3,
            isolated_fraction: 0.03,
            community_stance: vec![
                [0.75, 0.10, 0.15],
                [0.10, 0.75, 0.15],
                [0.15, 0.10, 0.75],
                [0.70, 0.20, 0.10],
            ],
            drift: vec![stay(0.78), stay(0.78)],
            tokens_per_tweet: 12,
            stance_word_rate: 0.008,
            stance_word_fidelity: 0.7,
            entity_rate: 0.008,
            entity_fidelity: 0.7,
            sentiment_rate: 0.08,
            sentiment_bias: 0.6,
            hashtag_rate: 0.3,
            mention_rate: 0.2,
            judgments: 3,
            annotator_accuracy: 0.9,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self, n_windows: usize) -> Result<()> {
        let fail = |m: String| Err(Error::Synth(m));
        if self.n_communities == 0 || self.n_users < self.n_communities {
            return fail(format!(
                "{} users cannot populate {} communities",
                self.n_users, self.n_communities
            ));
        }
        if self.community_stance.is_empty() {
            return fail("community_stance has no rows".into());
        }
        if self.drift.len() + 1 != n_windows {
            return fail(format!("{} drift matrices for {n_windows} windows", self.drift.len()));
        }
        let rows = self
            .community_stance
            .iter()
            .chain(self.drift.iter().flat_map(|m| m.iter()));
        for row in rows {
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return fail(format!("distribution {row:?} does not sum to 1"));
            }
        }
        let probabilities = [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("mutual_fraction", self.mutual_fraction),
            ("isolated_fraction", self.isolated_fraction),
            ("stance_word_fidelity", self.stance_word_fidelity),
            ("entity_fidelity", self.entity_fidelity),
            ("sentiment_bias", self.sentiment_bias),
            ("hashtag_rate", self.hashtag_rate),
            ("mention_rate", self.mention_rate),
            ("annotator_accuracy", self.annotator_accuracy),
        ];
        for (name, p) in probabilities {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} = {p} is not a probability"));
            }
        }
        if self.p_in <= self.p_out {
            return fail(format!("p_in {} must exceed p_out {}", self.p_in, self.p_out));
        }
        let token_mix = self.stance_word_rate + self.entity_rate + self.sentiment_rate;
        if [self.stance_word_rate, self.entity_rate, self.sentiment_rate]
            .iter()
            .any(|&r| r < 0.0)
            || token_mix > 1.0
        {
            return fail("token rates must be non-negative and sum to at most 1".into());
        }
        if self.tokens_per_tweet == 0 {
            return fail("tokens_per_tweet must be positive".into());
        }
        if !(2..=3).contains(&self.judgments) {
            return fail(format!("{} judgments per triplet; use 2 or 3", self.judgments));
        }
        Ok(())
    }
}

/// Ground truth behind a generated dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Planted {
    /// Community of every graph node, seed users and friends alike.
    pub communities: BTreeMap<String, usize>,
    /// Planted stance of every seed user per window.
    pub stances: BTreeMap<String, Vec<StanceLabel>>,
    pub isolated: BTreeSet<String>,
}

#[derive(Clone, Debug)]
pub struct SynthDataset {
    pub config: SynthConfig,
    pub corpus: Corpus,
    /// `(follower, followed)` pairs.
    pub edges: Vec<(String, String)>,
    pub parties: Vec<PartyRecord>,
    pub politicians: Vec<PoliticianRecord>,
    pub planted: Planted,
}

const LEAVE_WORDS: [&str; 4] = ["leave", "voteleave", "takecontrol", "independence"];
const REMAIN_WORDS: [&str; 4] = ["remain", "strongerin", "together", "europeanunion"];
const POSITIVE: [&str; 8] = ["good", "great", "happy", "hope", "proud", "win", "strong", "best"];
const NEGATIVE: [&str; 8] = ["bad", "sad", "fear", "worst", "angry", "disaster", "crash", "shame"];
const FILLER: [&str; 48] = [
    "the", "a", "and", "of", "to", "is", "it", "this", "that", "on", "for", "with", "we", "they", "people", "country",
    "today", "vote", "news", "result", "market", "pound", "britain", "uk", "eu", "europe", "just", "now", "what",
    "will", "about", "all", "after", "time", "day", "morning", "night", "everyone", "watch", "read", "think", "say",
    "see", "new", "big", "more", "still", "here",
];
const HASHTAGS: [&str; 3] = ["#brexit", "#euref", "#referendum"];

fn parties() -> Vec<PartyRecord> {
    let p = |id: &str, stance, aliases: &[&str]| PartyRecord {
        id: id.into(),
        stance,
        aliases: aliases.iter().map(|s| s.to_string()).collect(),
    };
    vec![
        p(
            "Sovereignty Party",
            StanceLabel::Leave,
            &["sovereignty party", "sovparty"],
        ),
        p("Freedom League", StanceLabel::Leave, &["freedom league"]),
        p("Union Alliance", StanceLabel::Remain, &["union alliance", "unionists"]),
        p(
            "Continental Liberals",
            StanceLabel::Remain,
            &["continental liberals", "conlibs"],
        ),
        p("Centre Forum", StanceLabel::None, &["centre forum"]),
    ]
}

fn politicians() -> Vec<PoliticianRecord> {
    let p = |id: &str, parties: &[&str], aliases: &[&str]| PoliticianRecord {
        id: id.into(),
        parties: parties.iter().map(|s| s.to_string()).collect(),
        aliases: aliases.iter().map(|s| s.to_string()).collect(),
    };
    vec![
        p("Ada Marsh", &["Sovereignty Party"], &["ada marsh", "marsh"]),
        p("Ben Okafor", &["Freedom League"], &["ben okafor", "okafor"]),
        p("Cora Lind", &["Union Alliance"], &["cora lind", "lind"]),
        p(
            "Dev Patel-Hart",
            &["Continental Liberals"],
            &["dev patel-hart", "patelhart"],
        ),
        p("Eli Stone", &["Centre Forum"], &["eli stone"]),
        p(
            "Fay Hollis",
            &["Union Alliance", "Sovereignty Party"],
            &["fay hollis", "hollis"],
        ),
    ]
}

/// Aliases whose inferred stance set is exactly `{stance}`.
fn entity_aliases(stance: StanceLabel) -> Vec<&'static str> {
    match stance {
        StanceLabel::Leave => vec!["sovparty", "freedom league", "marsh", "okafor"],
        StanceLabel::Remain => vec!["unionists", "conlibs", "lind", "patelhart"],
        StanceLabel::None => vec!["centre forum", "eli stone"],
    }
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

fn other_label<R: Rng>(rng: &mut R, l: StanceLabel) -> StanceLabel {
    let others: Vec<StanceLabel> = StanceLabel::ALL.into_iter().filter(|&x| x != l).collect();
    others[rng.gen_range(0..2)]
}

fn tweet_text<R: Rng>(rng: &mut R, cfg: &SynthConfig, stance: StanceLabel, accounts: &[String]) -> String {
    let mut tokens: Vec<String> = Vec::with_capacity(cfg.tokens_per_tweet + 2);
    for _ in 0..cfg.tokens_per_tweet {
        let r: f64 = rng.gen();
        let word = if r < cfg.stance_word_rate {
            let side = match stance {
                StanceLabel::None => {
                    if rng.gen_bool(0.5) {
                        StanceLabel::Leave
                    } else {
                        StanceLabel::Remain
                    }
                }
                s if rng.gen_bool(cfg.stance_word_fidelity) => s,
                StanceLabel::Leave => StanceLabel::Remain,
                StanceLabel::Remain => StanceLabel::Leave,
            };
            pick(
                rng,
                if side == StanceLabel::Leave {
                    &LEAVE_WORDS
                } else {
                    &REMAIN_WORDS
                },
            )
        } else if r < cfg.stance_word_rate + cfg.entity_rate {
            let side = if rng.gen_bool(cfg.entity_fidelity) {
                stance
            } else {
                other_label(rng, stance)
            };
            pick(rng, &entity_aliases(side))
        } else if r < cfg.stance_word_rate + cfg.entity_rate + cfg.sentiment_rate {
            let positive = match stance {
                StanceLabel::Leave => rng.gen_bool(cfg.sentiment_bias),
                StanceLabel::Remain => !rng.gen_bool(cfg.sentiment_bias),
                StanceLabel::None => rng.gen_bool(0.5),
            };
            pick(rng, if positive { &POSITIVE } else { &NEGATIVE })
        } else {
            pick(rng, &FILLER)
        };
        tokens.push(word.to_string());
    }
    if rng.gen_bool(cfg.hashtag_rate) {
        tokens.push(pick(rng, &HASHTAGS).to_string());
    }
    if rng.gen_bool(cfg.mention_rate) {
        tokens.insert(0, format!("@{}", accounts[rng.gen_range(0..accounts.len())]));
    }
    let mut text = tokens.join(" ");
    match rng.gen_range(0..6) {
        0 => text.push('!'),
        1 => text.push('?'),
        2 | 3 => text.push('.'),
        _ => {}
    }
    text
}

fn judge<R: Rng>(rng: &mut R, cfg: &SynthConfig, stance: StanceLabel) -> Vec<Judgment> {
    let mut labels: Vec<StanceLabel> = (0..cfg.judgments)
        .map(|_| {
            if rng.gen_bool(cfg.annotator_accuracy) {
                stance
            } else {
                other_label(rng, stance)
            }
        })
        .collect();
    // a two-judgment split would call for a third opinion; settle it with the planted label
    if labels.len() == 2 && labels[0] != labels[1] {
        labels[1] = labels[0];
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(k, label)| Judgment {
            worker: format!("w{k}"),
            label,
        })
        .collect()
}

/// Generates a dataset; the same configuration always yields the same dataset.
pub fn generate(config: &SynthConfig) -> Result<SynthDataset> {
    let windows: Vec<TimeWindow> = default_windows();
    config.validate(windows.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let k = config.n_communities;

    let width = (config.n_users + config.n_friends).to_string().len().max(4);
    let users: Vec<String> = (0..config.n_users).map(|i| format!("user{i:0width$}")).collect();
    let friends: Vec<String> = (0..config.n_friends).map(|i| format!("acct{i:0width$}")).collect();

    // planted communities: balanced, shuffled
    let mut community = BTreeMap::new();
    let mut slots: Vec<usize> = (0..config.n_users).map(|i| i % k).collect();
    slots.shuffle(&mut rng);
    for (u, c) in users.iter().zip(slots) {
        community.insert(u.clone(), c);
    }
    let mut slots: Vec<usize> = (0..config.n_friends).map(|i| i % k).collect();
    slots.shuffle(&mut rng);
    for (f, c) in friends.iter().zip(slots) {
        community.insert(f.clone(), c);
    }

    let n_isolated = (config.isolated_fraction * config.n_users as f64).round() as usize;
    let mut order: Vec<usize> = (0..config.n_users).collect();
    order.shuffle(&mut rng);
    let isolated: BTreeSet<String> = order[..n_isolated].iter().map(|&i| users[i].clone()).collect();

    // stochastic block model over every non-isolated node
    let nodes: Vec<&String> = users
        .iter()
        .filter(|u| !isolated.contains(*u))
        .chain(friends.iter())
        .collect();
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let p = if community[nodes[i]] == community[nodes[j]] {
                config.p_in
            } else {
                config.p_out
            };
            if !rng.gen_bool(p) {
                continue;
            }
            let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            edges.push((nodes[a].clone(), nodes[b].clone()));
            if rng.gen_bool(config.mutual_fraction) {
                edges.push((nodes[b].clone(), nodes[a].clone()));
            }
        }
    }

    // stance trajectories
    let mut stances = BTreeMap::new();
    for u in &users {
        let row = &config.community_stance[community[u] % config.community_stance.len()];
        let mut s = StanceLabel::from_index(WeightedIndex::new(row).expect("valid row").sample(&mut rng))
            .expect("three labels");
        let mut path = vec![s];
        for m in &config.drift {
            s = StanceLabel::from_index(WeightedIndex::new(m[s.index()]).expect("valid row").sample(&mut rng))
                .expect("three labels");
            path.push(s);
        }
        stances.insert(u.clone(), path);
    }

    let accounts: Vec<String> = users.iter().chain(&friends).cloned().collect();
    let mut tweets = Vec::new();
    let mut triplets = Vec::new();
    for u in &users {
        for (w, window) in windows.iter().enumerate() {
            let stance = stances[u][w];
            let span = (window.end - window.start).num_seconds();
            let mut offsets: Vec<i64> = (0..3).map(|_| rng.gen_range(0..span)).collect();
            offsets.sort_unstable();
            let mut ids = Vec::new();
            for (t, off) in offsets.into_iter().enumerate() {
                let id = format!("{u}-{}-{t}", window.name.to_lowercase());
                tweets.push(RawTweet {
                    tweet_id: id.clone(),
                    user_id: u.clone(),
                    text: tweet_text(&mut rng, config, stance, &accounts),
                    timestamp: window.start + Duration::seconds(off),
                });
                ids.push(id);
            }
            let judgments = judge(&mut rng, config, stance);
            let gold = crate::corpus::aggregate_annotations(&judgments.iter().map(|j| j.label).collect::<Vec<_>>())?;
            let agreeing = match gold {
                crate::corpus::Aggregate::Gold(g) => judgments.iter().filter(|j| j.label == g).count(),
                _ => 1,
            };
            triplets.push(RawTriplet {
                user_id: u.clone(),
                window: Some(w),
                tweet_ids: ids,
                confidence: Some(agreeing as f64 / judgments.len() as f64),
                judgments,
            });
        }
    }
    let corpus = Corpus::assemble(windows, tweets, triplets)?;
    Ok(SynthDataset {
        config: config.clone(),
        corpus,
        edges,
        parties: parties(),
        politicians: politicians(),
        planted: Planted {
            communities: community,
            stances,
            isolated,
        },
    })
}

/// Files written by [`write_dataset`], relative to its output directory.
pub const DATASET_FILES: [&str; 12] = [
    "config.json",
    "windows.json",
    "tweets.jsonl",
    "triplets.jsonl",
    "edges.tsv",
    "parties.json",
    "politicians.json",
    "planted.json",
    "lexica/afinn.tsv",
    "lexica/huliu.tsv",
    "lexica/liwc.tsv",
    "lexica/dal.tsv",
];

/// Writes the corpus, edge list, gazetteer snapshots, lexica and ground truth under `dir`.
pub fn write_dataset(dir: impl AsRef<Path>, data: &SynthDataset) -> Result<()> {
    let dir = dir.as_ref();
    write_corpus(dir, &data.corpus)?;
    let json = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    };
    json("config.json", serde_json::to_string_pretty(&data.config)?)?;
    json("parties.json", serde_json::to_string_pretty(&data.parties)?)?;
    json("politicians.json", serde_json::to_string_pretty(&data.politicians)?)?;
    json("planted.json", serde_json::to_string_pretty(&data.planted)?)?;
    write_edges_tsv(dir.join("edges.tsv"), &data.edges)?;
    let lex = dir.join("lexica");
    fs::create_dir_all(&lex).map_err(|e| Error::io(&lex, e))?;
    for (role, text) in LexiconSet::<f64>::builtin_sources() {
        let path = lex.join(format!("{role}.tsv"));
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
