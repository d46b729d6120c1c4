//! Stance detection with context features.
//!
//! The crate covers the whole experimental pipeline: a diachronic triplet corpus
//! ([`corpus`]), follower-graph community detection ([`graph`]), a party/politician
//! gazetteer ([`knowledge`]), segmented sparse features ([`features`]), from-scratch
//! classifiers ([`learn`]), cross-validated experiments ([`eval`]) and a synthetic data
//! generator with planted structure ([`synth`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix it to
//! `f64`.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod knowledge;
pub mod label;
pub mod learn;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use label::StanceLabel;
pub use scalar::Scalar;

pub type FeatureVector = features::FeatureVector<f64>;
pub type FeatureContext = features::FeatureContext<f64>;
pub type LexiconSet = features::LexiconSet<f64>;
pub type Partition = graph::Partition<f64>;
pub type Dataset = learn::Dataset<f64>;
pub type LabeledInstance = learn::LabeledInstance<f64>;
pub type Model = learn::Model<f64>;
pub type Prepared = eval::Prepared<f64>;
