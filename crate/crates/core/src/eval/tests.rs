use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::corpus::fixtures::corpus_with_labels;
use crate::features::{FeatureContext, FeatureGroup, GroupSet, TextUnit};
use crate::label::StanceLabel::{self, Leave as L, None as N, Remain as R};
use crate::learn::Algorithm;

fn units(n: usize) -> Vec<LabeledUnit> {
    (0..n)
        .map(|i| {
            let label = StanceLabel::ALL[i % 3];
            let word = match label {
                L => "leave out go",
                R => "remain stay in",
                N => "weather football lunch",
            };
            LabeledUnit {
                unit: TextUnit {
                    id: format!("x{i}"),
                    user_id: format!("u{}", i / 2),
                    window: (i / 3) % 3,
                    text: format!("{word} filler{} !", i % 7),
                },
                label,
                triplet_id: format!("u{}@{}", i / 2, (i / 3) % 3),
            }
        })
        .collect()
}

fn prepared(n: usize) -> Prepared<f64> {
    Prepared::new(units(n), FeatureContext::new(3)).unwrap()
}

#[test]
fn confusion_fixture_scores() {
    let c = ConfusionCounts::from_matrix([[2, 1, 0], [0, 1, 0], [0, 0, 1]]);
    let s = f1_per_class(&c);
    assert!((s[0].precision - 1.0).abs() < 1e-12);
    assert!((s[0].recall - 2.0 / 3.0).abs() < 1e-12);
    assert!((s[0].f1 - 0.8).abs() < 1e-12);
    assert!((s[1].precision - 0.5).abs() < 1e-12);
    assert!((s[1].f1 - 2.0 / 3.0).abs() < 1e-12);
    assert!((f_avg(&s) - 0.733_333_333_333).abs() < 1e-6);
    assert_eq!(c.total(), 5);
}

#[test]
fn oracle_predictions_score_one() {
    let gold = [L, R, N, L, L, R];
    let c = ConfusionCounts::from_pairs(gold.iter().map(|&g| (g, g)));
    let s = f1_per_class(&c);
    for cs in s {
        assert_eq!((cs.precision, cs.recall, cs.f1), (1.0, 1.0, 1.0));
    }
    assert_eq!(f_avg(&s), 1.0);
    assert_eq!(c.accuracy(), 1.0);
}

#[test]
fn zero_denominators_are_zero() {
    let c = ConfusionCounts::from_pairs([(L, L), (L, N)]);
    let s = f1_per_class(&c);
    assert_eq!((s[1].precision, s[1].recall, s[1].f1), (0.0, 0.0, 0.0));
    let none = ConfusionCounts::from_pairs([(N, N)]);
    assert_eq!(f_avg(&f1_per_class(&none)), 0.0);
}

#[test]
fn percent_rounds_half_up() {
    assert_eq!(percent(0.733_333_3), "73.33");
    assert_eq!(percent(0.123_45), "12.35");
    assert_eq!(percent(0.5), "50.00");
    assert_eq!(percent(1.0), "100.00");
    assert_eq!(percent(0.0), "0.00");
    assert_eq!(percent(-0.000_01), "0.00");
}

#[test]
fn stratified_folds_are_balanced_and_deterministic() {
    let mut u = units(1760);
    for (i, x) in u.iter_mut().enumerate() {
        x.label = if i < 961 {
            L
        } else if i < 1197 {
            R
        } else {
            N
        };
    }
    let folds = assign_folds(&u, 5, FoldStrategy::Stratified, 3).unwrap();
    for f in 0..5 {
        let size = folds.iter().filter(|&&x| x == f).count();
        assert!((351..=353).contains(&size), "fold {f} has {size}");
    }
    assert_eq!(folds, assign_folds(&u, 5, FoldStrategy::Stratified, 3).unwrap());
    assert_ne!(folds, assign_folds(&u, 5, FoldStrategy::Stratified, 4).unwrap());
}

#[test]
fn user_grouped_folds_separate_users() {
    let u = units(100);
    let folds = assign_folds(&u, 5, FoldStrategy::UserGrouped, 1).unwrap();
    for f in 0..5 {
        let test: BTreeSet<&str> = (0..u.len())
            .filter(|&i| folds[i] == f)
            .map(|i| u[i].unit.user_id.as_str())
            .collect();
        let train: BTreeSet<&str> = (0..u.len())
            .filter(|&i| folds[i] != f)
            .map(|i| u[i].unit.user_id.as_str())
            .collect();
        assert!(test.is_disjoint(&train));
        assert!(!test.is_empty());
    }
}

#[test]
fn fold_errors() {
    assert!(assign_folds(&units(10), 1, FoldStrategy::Stratified, 0).is_err());
    assert!(assign_folds(&units(3), 5, FoldStrategy::Stratified, 0).is_err());
    assert!(assign_folds(&units(8), 5, FoldStrategy::UserGrouped, 0).is_err());
}

#[test]
fn cross_validation_pools_folds() {
    let data = prepared(90);
    let s = ExperimentSettings::default();
    let r = cross_validate(
        &data,
        Algorithm::Svm,
        FeatureSetup::Groups(GroupSet::EMPTY.with(FeatureGroup::Bow)),
        &s,
    )
    .unwrap();
    let mut sum = ConfusionCounts::default();
    for f in &r.folds {
        sum += f.confusion;
    }
    assert_eq!(sum, r.confusion);
    assert_eq!(r.confusion.total(), 90);
    assert!((r.f_avg - (r.f1(L) + r.f1(R)) / 2.0).abs() < 1e-9);
    assert!(r.f_avg > 0.95, "separable words should be learnt: {}", r.f_avg);
    let again = cross_validate(
        &data,
        Algorithm::Svm,
        FeatureSetup::Groups(GroupSet::EMPTY.with(FeatureGroup::Bow)),
        &s,
    )
    .unwrap();
    assert_eq!(
        serde_json::to_string(&r).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
}

#[test]
fn ngram_baselines_and_majority_class_run() {
    let data = prepared(60);
    let s = ExperimentSettings::default();
    for setup in [FeatureSetup::Unigrams, FeatureSetup::Ngrams] {
        let r = cross_validate(&data, Algorithm::Svm, setup, &s).unwrap();
        assert!(r.f_avg > 0.9);
    }
    let mc = cross_validate(&data, Algorithm::MajorityClass, FeatureSetup::Unigrams, &s).unwrap();
    assert_eq!(mc.confusion.total(), 60);
}

#[test]
fn report_json_round_trips() {
    let data = prepared(45);
    let r = cross_validate(
        &data,
        Algorithm::NaiveBayes,
        "bow+structural".parse().unwrap(),
        &ExperimentSettings::default(),
    )
    .unwrap();
    let a = serde_json::to_string(&r).unwrap();
    let back: EvalReport = serde_json::from_str(&a).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string(&back).unwrap(), a);
}

#[test]
fn sweep_covers_every_subset() {
    let data = prepared(45);
    let groups: GroupSet = "bow+structural".parse().unwrap();
    let out = sweep_combinations(
        &data,
        &[Algorithm::DecisionTree, Algorithm::MajorityClass],
        groups,
        &ExperimentSettings::default(),
    )
    .unwrap();
    assert_eq!(out.rows.len(), 6);
    assert!(out.rows.windows(2).all(|w| w[0].f_avg >= w[1].f_avg));
    assert_eq!(out.best.len(), 2);
    let csv = sweep_csv(&out.rows).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.starts_with("algorithm,groups,f_leave,f_remain,f_none,f_avg,seed,strategy\n"));
}

#[test]
fn ablation_rows() {
    let data = prepared(45);
    let base: GroupSet = "bow+structural+de-cxt".parse().unwrap();
    let t = ablation(&data, Algorithm::Svm, base, &ExperimentSettings::default()).unwrap();
    let names: Vec<&str> = t.rows.iter().map(|r| r.removed.as_str()).collect();
    assert_eq!(names, ["all", "context-based", "bow", "structural", "de-cxt"]);
    assert_eq!(t.rows[0].delta, 0.0);
    assert_eq!(t.largest_drop().unwrap().removed, "bow");
    for r in &t.rows {
        assert!((r.delta_pct - r.delta / t.rows[0].f_avg * 100.0).abs() < 1e-9);
    }
    assert!(ablation_markdown(&t).contains("All - bow"));
}

#[test]
fn temporal_runs_drop_diachronic_group() {
    let data = prepared(90);
    let names: Vec<String> = ["RD", "OD", "APF"].map(String::from).to_vec();
    let rows = temporal_experiment(
        &data,
        &[(Algorithm::Svm, "bow+de-cxt".parse().unwrap())],
        &names,
        &ExperimentSettings::default(),
    )
    .unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r.report.n_instances, 30);
        assert_eq!(r.report.features.to_string(), "bow");
    }
    let only_de = temporal_experiment(
        &data,
        &[(Algorithm::Svm, "de-cxt".parse().unwrap())],
        &names,
        &ExperimentSettings::default(),
    );
    assert!(only_de.is_err());
    let small = prepared(9);
    assert!(temporal_experiment(
        &small,
        &[(Algorithm::Svm, "bow".parse().unwrap())],
        &names,
        &ExperimentSettings::default()
    )
    .is_err());
}

#[test]
fn tweet_level_triples_triplet_level() {
    let c = corpus_with_labels(&[&[L, R, N], &[R, R, L]]);
    let trip = triplet_level_dataset(&c);
    let tw = tweet_level_dataset(&c);
    assert_eq!(trip.len(), 6);
    assert_eq!(tw.len(), 18);
    for t in &tw {
        let parent = trip.iter().find(|p| p.triplet_id == t.triplet_id).unwrap();
        assert_eq!(parent.label, t.label);
        assert_eq!(parent.unit.window, t.unit.window);
    }
    assert_eq!(trip[0].unit.text.matches("#brexit").count(), 3);
}

#[test]
fn feature_setup_parses() {
    assert_eq!("ngrams".parse::<FeatureSetup>().unwrap(), FeatureSetup::Ngrams);
    let s: FeatureSetup = "comm-cxt,bow".parse().unwrap();
    assert_eq!(s.to_string(), "bow+comm-cxt");
    assert_eq!(serde_json::to_string(&s).unwrap(), "\"bow+comm-cxt\"");
}

proptest! {
    #[test]
    fn f_avg_ignores_order(pairs in proptest::collection::vec((0usize..3, 0usize..3), 1..60), rot in 0usize..60) {
        let p: Vec<(StanceLabel, StanceLabel)> = pairs.iter().map(|&(a, b)| (StanceLabel::ALL[a], StanceLabel::ALL[b])).collect();
        let mut q = p.clone();
        q.rotate_left(rot % p.len());
        q.reverse();
        let a = f_avg(&f1_per_class(&ConfusionCounts::from_pairs(p)));
        let b = f_avg(&f1_per_class(&ConfusionCounts::from_pairs(q)));
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
