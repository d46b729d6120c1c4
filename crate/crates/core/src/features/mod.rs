//! Segmented sparse features for tweets and triplets.
//!
//! A unit is first analysed once ([`analyze`]): tokens, structural counts, lexicon sums,
//! gazetteer hits and community lookup. A [`FeatureSpace`] fitted on a training split then
//! lays the selected groups out as contiguous column segments in a fixed order (BoW,
//! structural, sentiment, common-knowledge, diachronic, community).

mod group;
mod lexicon;
mod space;
mod tokenize;
mod vector;

pub use group::{FeatureGroup, GroupSet};
pub use lexicon::{sentiment_features, Lexicon, LexiconSet, LEXICON_ROLES};
pub use space::{
    analyze, common_knowledge_features, community_feature, diachronic_feature, structural_counts, Analysis,
    BowWeighting, FeatureContext, FeatureSpace, Segment, TextUnit, KNOWLEDGE_NAMES, SENTIMENT_NAMES, STRUCTURAL_NAMES,
};
pub use tokenize::tokenize;
pub use vector::FeatureVector;
