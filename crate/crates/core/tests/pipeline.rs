mod common;

use common::adjusted_rand_index;
use proptest::prelude::*;
use stance_core::corpus::load_corpus;
use stance_core::eval::{
    cross_validate, triplet_level_dataset, tweet_level_dataset, ExperimentSettings, FeatureSetup, Prepared,
};
use stance_core::features::{FeatureContext, GroupSet, LexiconSet};
use stance_core::graph::{build_graph, communities_for_users, CommunityRun, FilterMode, LouvainConfig};
use stance_core::knowledge::build_gazetteer;
use stance_core::learn::Algorithm;
use stance_core::synth::{generate, write_dataset, SynthConfig, SynthDataset};
use stance_core::Scalar;

fn small(seed: u64) -> SynthConfig {
    SynthConfig {
        seed,
        n_users: 90,
        n_friends: 150,
        ..SynthConfig::default()
    }
}

fn communities<T: Scalar>(data: &SynthDataset) -> CommunityRun<T> {
    let graph = build_graph(data.edges.iter().cloned().map(Ok)).unwrap();
    communities_for_users(
        &graph,
        &data.corpus.users,
        10,
        FilterMode::Iterative,
        &LouvainConfig::with_seed(1),
    )
    .unwrap()
}

fn prepared<T: Scalar>(data: &SynthDataset) -> Prepared<T> {
    let mut ctx = FeatureContext::<T>::new(data.corpus.windows.len());
    ctx.lexica = Some(LexiconSet::builtin());
    ctx.gazetteer = Some(build_gazetteer(&data.parties, &data.politicians).unwrap());
    ctx.communities = Some(communities::<T>(data).assignment);
    Prepared::new(triplet_level_dataset(&data.corpus), ctx).unwrap()
}

#[test]
fn louvain_recovers_the_planted_blocks() {
    let data = generate(&SynthConfig::default()).unwrap();
    let run = communities::<f64>(&data);
    let connected: Vec<&String> = data
        .corpus
        .users
        .iter()
        .filter(|u| !data.planted.isolated.contains(*u))
        .collect();
    let planted: Vec<usize> = connected.iter().map(|u| data.planted.communities[*u]).collect();
    let found: Vec<usize> = connected
        .iter()
        .map(|u| run.assignment.community_of(u).unwrap())
        .collect();
    let ari = adjusted_rand_index(&planted, &found);
    assert!(ari > 0.9, "ARI {ari}");
    for u in &data.planted.isolated {
        assert_eq!(
            run.assignment.community_of(u),
            Some(run.assignment.isolated_community_id)
        );
    }
}

#[test]
fn written_dataset_reloads_to_the_same_corpus() {
    let data = generate(&small(3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), &data).unwrap();
    let back = load_corpus(dir.path()).unwrap();
    assert_eq!(back.users, data.corpus.users);
    assert_eq!(back.triplets, data.corpus.triplets);
}

#[test]
fn cross_validation_is_reproducible() {
    let data = generate(&small(5)).unwrap();
    let settings = ExperimentSettings::default();
    for algo in [Algorithm::Svm, Algorithm::RandomForest] {
        let a = cross_validate(
            &prepared::<f64>(&data),
            algo,
            FeatureSetup::Groups(GroupSet::ALL),
            &settings,
        )
        .unwrap();
        let b = cross_validate(
            &prepared::<f64>(&data),
            algo,
            FeatureSetup::Groups(GroupSet::ALL),
            &settings,
        )
        .unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.n_instances, data.corpus.gold_triplets().count());
    }
}

#[test]
fn single_precision_pipeline_tracks_double() {
    let data = generate(&small(6)).unwrap();
    let settings = ExperimentSettings::default();
    let setup = "sentiment+comm-know-cxt+comm-cxt".parse().unwrap();
    for algo in [Algorithm::NaiveBayes, Algorithm::Svm] {
        let single = cross_validate(&prepared::<f32>(&data), algo, setup, &settings).unwrap();
        let double = cross_validate(&prepared::<f64>(&data), algo, setup, &settings).unwrap();
        assert!(
            (single.f_avg - double.f_avg).abs() < 0.05,
            "{algo}: {} vs {}",
            single.f_avg,
            double.f_avg
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_gold_triplet_yields_three_tweets(seed in 0u64..10_000) {
        let cfg = SynthConfig { seed, n_users: 20, n_friends: 20, ..SynthConfig::default() };
        let data = generate(&cfg).unwrap();
        let triplets = triplet_level_dataset(&data.corpus);
        let tweets = tweet_level_dataset(&data.corpus);
        prop_assert_eq!(tweets.len(), 3 * triplets.len());
        for (i, t) in triplets.iter().enumerate() {
            for tw in &tweets[3 * i..3 * i + 3] {
                prop_assert_eq!(tw.label, t.label);
                prop_assert_eq!(&tw.triplet_id, &t.triplet_id);
                prop_assert_eq!(&tw.unit.user_id, &t.unit.user_id);
            }
        }
    }
}
