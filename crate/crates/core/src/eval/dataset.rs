use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::features::TextUnit;
use crate::label::StanceLabel;

/// A unit of text with its gold label, before feature extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledUnit {
    pub unit: TextUnit,
    pub label: StanceLabel,
    pub triplet_id: String,
}

/// One instance per gold triplet; the three tweets are joined by single spaces.
pub fn triplet_level_dataset(corpus: &Corpus) -> Vec<LabeledUnit> {
    corpus
        .gold_triplets()
        .map(|t| {
            let text = corpus.triplet_texts(t).collect::<Vec<_>>().join(" ");
            LabeledUnit {
                unit: TextUnit {
                    id: t.id(),
                    user_id: t.user_id.clone(),
                    window: t.window,
                    text,
                },
                label: t.gold.expect("gold triplet"),
                triplet_id: t.id(),
            }
        })
        .collect()
}

/// Three instances per gold triplet, each tweet inheriting the triplet's label and window.
pub fn tweet_level_dataset(corpus: &Corpus) -> Vec<LabeledUnit> {
    let mut out = Vec::new();
    for t in corpus.gold_triplets() {
        for id in &t.tweet_ids {
            let tweet = corpus.tweet(id).expect("validated corpus");
            out.push(LabeledUnit {
                unit: TextUnit {
                    id: id.clone(),
                    user_id: t.user_id.clone(),
                    window: t.window,
                    text: tweet.text.clone(),
                },
                label: t.gold.expect("gold triplet"),
                triplet_id: t.id(),
            });
        }
    }
    out
}
