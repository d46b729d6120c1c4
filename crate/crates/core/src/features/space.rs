use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::group::{FeatureGroup, GroupSet};
use super::lexicon::{sentiment_features, LexiconSet};
use super::tokenize::{strip_urls, tokenize};
use super::vector::FeatureVector;
use crate::error::{Error, Result};
use crate::graph::CommunityAssignment;
use crate::knowledge::{explicit_stance_words, match_entities, EntityKind, Gazetteer, StanceVocabulary};
use crate::label::StanceLabel;
use crate::scalar::Scalar;

/// Text to classify, with the user and window it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextUnit {
    pub id: String,
    pub user_id: String,
    pub window: usize,
    pub text: String,
}

/// Shared read-only resources needed by the context and sentiment groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FeatureContext<T> {
    pub n_windows: usize,
    pub lexica: Option<LexiconSet<T>>,
    pub gazetteer: Option<Gazetteer>,
    pub stance_vocabulary: StanceVocabulary,
    pub communities: Option<CommunityAssignment>,
}

impl<T: Scalar> FeatureContext<T> {
    pub fn new(n_windows: usize) -> Self {
        FeatureContext {
            n_windows,
            lexica: None,
            gazetteer: None,
            stance_vocabulary: StanceVocabulary::default(),
            communities: None,
        }
    }

    /// Fails if a group in `groups` lacks the resource it is computed from.
    pub fn check(&self, groups: GroupSet) -> Result<()> {
        for g in groups.iter() {
            match g {
                FeatureGroup::Sentiment => match &self.lexica {
                    None => return Err(Error::MissingContext(g.name())),
                    Some(l) if !l.is_complete() => {
                        sentiment_features::<T>(&[], l)?;
                    }
                    Some(_) => {}
                },
                FeatureGroup::CommKnowCxt if self.gazetteer.is_none() => return Err(Error::MissingContext(g.name())),
                FeatureGroup::DeCxt if self.n_windows == 0 => return Err(Error::MissingContext(g.name())),
                FeatureGroup::CommCxt if self.communities.is_none() => return Err(Error::MissingContext(g.name())),
                _ => {}
            }
        }
        Ok(())
    }
}

pub const STRUCTURAL_NAMES: [&str; 9] = [
    "hashtags",
    "mentions",
    "exclamations",
    "questions",
    "periods",
    "commas",
    "semicolons",
    "punctuation",
    "length",
];

pub const KNOWLEDGE_NAMES: [&str; 8] = [
    "party_against",
    "party_favour",
    "party_neutral",
    "politician_against",
    "politician_favour",
    "politician_neutral",
    "explicit_leave",
    "explicit_remain",
];

pub const SENTIMENT_NAMES: [&str; 6] = [
    "afinn",
    "huliu",
    "liwc",
    "dal_pleasantness",
    "dal_activation",
    "dal_imagery",
];

/// Nine structural counts: hashtags, mentions, `!`, `?`, `.`, `,`, `;`, their total, and
/// length in characters. Punctuation inside URLs is not counted.
pub fn structural_counts<T: Scalar>(text: &str, tokens: &[String]) -> [T; 9] {
    let hashtags = tokens.iter().filter(|t| t.len() > 1 && t.starts_with('#')).count();
    let mentions = tokens.iter().filter(|t| t.len() > 1 && t.starts_with('@')).count();
    let body = strip_urls(text);
    let count = |c: char| body.chars().filter(|&x| x == c).count();
    let punct = [count('!'), count('?'), count('.'), count(','), count(';')];
    let total: usize = punct.iter().sum();
    let raw = [
        hashtags,
        mentions,
        punct[0],
        punct[1],
        punct[2],
        punct[3],
        punct[4],
        total,
        text.chars().count(),
    ];
    raw.map(T::of_usize)
}

/// Party triple, politician triple and explicit-word pair, in [`KNOWLEDGE_NAMES`] order.
///
/// Favour means Leave, against means Remain, neutral means None. A politician with several
/// stances sets every corresponding element.
pub fn common_knowledge_features(text: &str, gazetteer: &Gazetteer, vocabulary: &StanceVocabulary) -> [bool; 8] {
    let slot = |l: StanceLabel| match l {
        StanceLabel::Remain => 0,
        StanceLabel::Leave => 1,
        StanceLabel::None => 2,
    };
    let mut out = [false; 8];
    for m in match_entities(text, gazetteer) {
        let base = match m.kind {
            EntityKind::Party => 0,
            EntityKind::Politician => 3,
        };
        for s in m.stances {
            out[base + slot(s)] = true;
        }
    }
    for s in explicit_stance_words(text, vocabulary) {
        match s {
            StanceLabel::Leave => out[6] = true,
            StanceLabel::Remain => out[7] = true,
            StanceLabel::None => {}
        }
    }
    out
}

/// One-hot over the configured windows.
pub fn diachronic_feature<T: Scalar>(window: usize, n_windows: usize) -> Result<Vec<T>> {
    if window >= n_windows {
        return Err(Error::Features(format!(
            "window {window} not among the {n_windows} configured windows"
        )));
    }
    let mut v = vec![T::zero(); n_windows];
    v[window] = T::one();
    Ok(v)
}

/// One-hot over communities, isolated community included. Users without a community get
/// the zero vector.
pub fn community_feature<T: Scalar>(user: &str, assignment: &CommunityAssignment) -> Result<Vec<T>> {
    let mut v = vec![T::zero(); assignment.n_communities];
    match assignment.community_of(user) {
        Some(c) if c < v.len() => v[c] = T::one(),
        Some(c) => {
            return Err(Error::Features(format!(
                "user `{user}` in community {c}, only {} configured",
                assignment.n_communities
            )))
        }
        None => log::warn!("user `{user}` has no community; comm-cxt left empty"),
    }
    Ok(v)
}

/// Split-independent facts about one unit, computed once and reused by every fold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Analysis<T> {
    pub user_id: String,
    pub window: usize,
    pub tokens: Vec<String>,
    pub structural: [T; 9],
    pub sentiment: Option<[T; 6]>,
    pub knowledge: Option<[bool; 8]>,
    pub community: Option<usize>,
}

pub fn analyze<T: Scalar>(unit: &TextUnit, ctx: &FeatureContext<T>) -> Result<Analysis<T>> {
    let tokens = tokenize(&unit.text);
    let sentiment = match &ctx.lexica {
        Some(l) if l.is_complete() => Some(sentiment_features(&tokens, l)?),
        _ => None,
    };
    let knowledge = ctx
        .gazetteer
        .as_ref()
        .map(|g| common_knowledge_features(&unit.text, g, &ctx.stance_vocabulary));
    let community = ctx.communities.as_ref().and_then(|a| a.community_of(&unit.user_id));
    Ok(Analysis {
        user_id: unit.user_id.clone(),
        window: unit.window,
        structural: structural_counts(&unit.text, &tokens),
        tokens,
        sentiment,
        knowledge,
        community,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BowWeighting {
    /// Presence of a training-vocabulary unigram.
    #[default]
    Binary,
    Count,
    /// Raw count × smoothed idf from the training split.
    TfIdf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub group: FeatureGroup,
    pub offset: usize,
    pub columns: Vec<String>,
}

impl Segment {
    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.size()
    }
}

/// Column layout fitted on a training split. Frozen once fitted: extraction never adds
/// columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    pub groups: GroupSet,
    pub bow_weighting: BowWeighting,
    pub segments: Vec<Segment>,
    bow_vocab: BTreeMap<String, usize>,
    bow_idf: Vec<f64>,
    hashtag_vocab: BTreeMap<String, usize>,
    mention_vocab: BTreeMap<String, usize>,
    n_windows: usize,
    n_communities: usize,
}

impl FeatureSpace {
    /// Fits vocabularies on `train` and lays out the segments of `groups`.
    pub fn fit<'a, T: Scalar>(
        train: impl IntoIterator<Item = &'a Analysis<T>>,
        groups: GroupSet,
        bow_weighting: BowWeighting,
        ctx: &FeatureContext<T>,
    ) -> Result<FeatureSpace> {
        if groups.is_empty() {
            return Err(Error::Features("no feature group selected".into()));
        }
        ctx.check(groups)?;
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        let mut hashtags = BTreeSet::new();
        let mut mentions = BTreeSet::new();
        let mut n_docs = 0usize;
        for a in train {
            n_docs += 1;
            let distinct: BTreeSet<&str> = a.tokens.iter().map(String::as_str).collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
                if t.len() > 1 && t.starts_with('#') {
                    hashtags.insert(t.to_string());
                } else if t.len() > 1 && t.starts_with('@') {
                    mentions.insert(t.to_string());
                }
            }
        }
        let index = |set: BTreeSet<String>| -> BTreeMap<String, usize> {
            set.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
        };

        let mut space = FeatureSpace {
            groups,
            bow_weighting,
            segments: Vec::new(),
            bow_vocab: BTreeMap::new(),
            bow_idf: Vec::new(),
            hashtag_vocab: BTreeMap::new(),
            mention_vocab: BTreeMap::new(),
            n_windows: ctx.n_windows,
            n_communities: ctx.communities.as_ref().map_or(0, |a| a.n_communities),
        };
        let mut offset = 0;
        for g in groups.iter() {
            let columns: Vec<String> = match g {
                FeatureGroup::Bow => {
                    space.bow_vocab = index(df.keys().map(|s| s.to_string()).collect());
                    space.bow_idf = df
                        .values()
                        .map(|&d| ((1.0 + n_docs as f64) / (1.0 + d as f64)).ln() + 1.0)
                        .collect();
                    space.bow_vocab.keys().map(|w| format!("w:{w}")).collect()
                }
                FeatureGroup::Structural => {
                    space.hashtag_vocab = index(hashtags.clone());
                    space.mention_vocab = index(mentions.clone());
                    STRUCTURAL_NAMES
                        .iter()
                        .map(|s| s.to_string())
                        .chain(space.hashtag_vocab.keys().map(|h| format!("tag:{h}")))
                        .chain(space.mention_vocab.keys().map(|m| format!("mention:{m}")))
                        .collect()
                }
                FeatureGroup::Sentiment => SENTIMENT_NAMES.iter().map(|s| s.to_string()).collect(),
                FeatureGroup::CommKnowCxt => KNOWLEDGE_NAMES.iter().map(|s| s.to_string()).collect(),
                FeatureGroup::DeCxt => (0..space.n_windows).map(|w| format!("window:{w}")).collect(),
                FeatureGroup::CommCxt => (0..space.n_communities).map(|c| format!("community:{c}")).collect(),
            };
            let seg = Segment {
                group: g,
                offset,
                columns,
            };
            offset += seg.size();
            space.segments.push(seg);
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.segments.last().map_or(0, |s| s.offset + s.size())
    }

    pub fn segment(&self, g: FeatureGroup) -> Option<&Segment> {
        self.segments.iter().find(|s| s.group == g)
    }

    pub fn bow_vocabulary(&self) -> impl Iterator<Item = &str> + '_ {
        self.bow_vocab.keys().map(String::as_str)
    }

    /// Columns holding real-valued (non-indicator) features.
    pub fn continuous_columns(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for s in &self.segments {
            match s.group {
                FeatureGroup::Structural => out.extend(s.offset..s.offset + STRUCTURAL_NAMES.len()),
                FeatureGroup::Sentiment => out.extend(s.range()),
                FeatureGroup::Bow if self.bow_weighting != BowWeighting::Binary => out.extend(s.range()),
                _ => {}
            }
        }
        out
    }

    /// Binary unigram (or count / tf-idf) values of the BoW segment, by local column.
    pub fn bow_features<T: Scalar>(&self, tokens: &[String]) -> Vec<(usize, T)> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for t in tokens {
            if let Some(&i) = self.bow_vocab.get(t) {
                *counts.entry(i).or_default() += 1;
            }
        }
        counts
            .into_iter()
            .map(|(i, c)| {
                let v = match self.bow_weighting {
                    BowWeighting::Binary => 1.0,
                    BowWeighting::Count => c as f64,
                    BowWeighting::TfIdf => c as f64 * self.bow_idf[i],
                };
                (i, T::of(v))
            })
            .collect()
    }

    /// Nine counts followed by hashtag-bag and mention-bag indicators, by local column.
    pub fn structural_features<T: Scalar>(&self, analysis: &Analysis<T>) -> Vec<(usize, T)> {
        let mut out: Vec<(usize, T)> = analysis.structural.iter().copied().enumerate().collect();
        let tags = STRUCTURAL_NAMES.len();
        let mentions = tags + self.hashtag_vocab.len();
        let seen: BTreeSet<&str> = analysis.tokens.iter().map(String::as_str).collect();
        for t in seen {
            if let Some(&i) = self.hashtag_vocab.get(t) {
                out.push((tags + i, T::one()));
            } else if let Some(&i) = self.mention_vocab.get(t) {
                out.push((mentions + i, T::one()));
            }
        }
        out
    }

    /// Concatenates the selected segments for one analysed unit.
    pub fn vectorize<T: Scalar>(&self, a: &Analysis<T>) -> Result<FeatureVector<T>> {
        let mut pairs: Vec<(usize, T)> = Vec::new();
        for seg in &self.segments {
            let local: Vec<(usize, T)> = match seg.group {
                FeatureGroup::Bow => self.bow_features(&a.tokens),
                FeatureGroup::Structural => self.structural_features(a),
                FeatureGroup::Sentiment => a
                    .sentiment
                    .ok_or(Error::MissingContext(seg.group.name()))?
                    .into_iter()
                    .enumerate()
                    .collect(),
                FeatureGroup::CommKnowCxt => a
                    .knowledge
                    .ok_or(Error::MissingContext(seg.group.name()))?
                    .into_iter()
                    .enumerate()
                    .filter(|(_, b)| *b)
                    .map(|(i, _)| (i, T::one()))
                    .collect(),
                FeatureGroup::DeCxt => diachronic_feature::<T>(a.window, self.n_windows)?
                    .into_iter()
                    .enumerate()
                    .collect(),
                FeatureGroup::CommCxt => match a.community {
                    Some(c) if c < self.n_communities => vec![(c, T::one())],
                    Some(c) => {
                        return Err(Error::Features(format!(
                            "community {c} outside the {} fitted communities",
                            self.n_communities
                        )))
                    }
                    None => {
                        log::warn!("user `{}` has no community; comm-cxt left empty", a.user_id);
                        Vec::new()
                    }
                },
            };
            pairs.extend(local.into_iter().map(|(i, v)| (seg.offset + i, v)));
        }
        Ok(FeatureVector::from_pairs(self.dim(), pairs))
    }

    /// Analyses and vectorises a single unit.
    pub fn extract<T: Scalar>(&self, unit: &TextUnit, ctx: &FeatureContext<T>) -> Result<FeatureVector<T>> {
        self.vectorize(&analyze(unit, ctx)?)
    }

    /// SHA-256 of the manifest JSON; models record it to refuse foreign spaces.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("space serialises");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn save_manifest(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string_pretty(self)? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load_manifest(path: impl AsRef<Path>) -> Result<FeatureSpace> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
