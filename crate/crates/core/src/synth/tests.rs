use super::*;
use crate::corpus::{load_corpus, stance_transitions};
use crate::graph::{build_graph, communities_for_users, community_stance_distribution, FilterMode, LouvainConfig};

fn small() -> SynthConfig {
    SynthConfig {
        n_users: 120,
        n_friends: 40,
        ..SynthConfig::default()
    }
}

#[test]
fn generated_corpus_is_valid_and_deterministic() {
    let a = generate(&small()).unwrap();
    let b = generate(&small()).unwrap();
    assert_eq!(a.corpus, b.corpus);
    assert_eq!(a.edges, b.edges);
    assert_eq!(a.corpus.users.len(), 120);
    assert_eq!(a.corpus.triplets.len(), 360);
    let c = generate(&SynthConfig { seed: 8, ..small() }).unwrap();
    assert_ne!(a.corpus, c.corpus);
}

#[test]
fn written_files_reload() {
    let data = generate(&small()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), &data).unwrap();
    for f in DATASET_FILES {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(load_corpus(dir.path()).unwrap(), data.corpus);
    let g = crate::graph::read_edges_tsv(dir.path().join("edges.tsv")).unwrap();
    assert!(g.edge_count() > 0);
    let lex = LexiconSet::<f64>::load_dir(dir.path().join("lexica")).unwrap();
    assert!(lex.is_complete());
    let parties: Vec<PartyRecord> = crate::knowledge::load_records(dir.path().join("parties.json")).unwrap();
    let pols: Vec<PoliticianRecord> = crate::knowledge::load_records(dir.path().join("politicians.json")).unwrap();
    let gaz = crate::knowledge::build_gazetteer(&parties, &pols).unwrap();
    assert_eq!(gaz.stats().multi_stance_politicians, 1);
}

#[test]
fn identity_drift_keeps_every_user_stable() {
    let eye = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let cfg = SynthConfig {
        drift: vec![eye, eye],
        annotator_accuracy: 1.0,
        ..small()
    };
    let data = generate(&cfg).unwrap();
    let t = stance_transitions(&data.corpus).unwrap();
    assert!((t.stable_fraction() - 1.0).abs() < 1e-12);
}

#[test]
fn disconnected_blocks_are_recovered() {
    let cfg = SynthConfig {
        n_users: 80,
        n_friends: 0,
        p_in: 0.4,
        p_out: 0.0,
        isolated_fraction: 0.0,
        ..SynthConfig::default()
    };
    let data = generate(&cfg).unwrap();
    let g = build_graph(data.edges.iter().cloned().map(Ok)).unwrap();
    let run = communities_for_users::<f64>(
        &g,
        &data.corpus.users,
        1,
        FilterMode::Iterative,
        &LouvainConfig::with_seed(1),
    )
    .unwrap();
    assert_eq!(run.partition.num_communities(), 4);
    // same block ⇔ same community
    let users: Vec<&String> = data.corpus.users.iter().collect();
    for a in &users {
        for b in &users {
            let planted = data.planted.communities[*a] == data.planted.communities[*b];
            let found = run.assignment.community_of(a) == run.assignment.community_of(b);
            assert_eq!(planted, found);
        }
    }
}

#[test]
fn community_stance_matches_configured_rows() {
    let cfg = SynthConfig {
        n_users: 2000,
        n_friends: 0,
        n_communities: 2,
        p_in: 0.01,
        p_out: 0.0005,
        isolated_fraction: 0.0,
        community_stance: vec![[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]],
        annotator_accuracy: 1.0,
        ..SynthConfig::default()
    };
    let data = generate(&cfg).unwrap();
    // use the planted partition to isolate the label law from detection noise
    let assignment = crate::graph::CommunityAssignment {
        communities: data
            .corpus
            .users
            .iter()
            .map(|u| (u.clone(), data.planted.communities[u]))
            .collect(),
        isolated_community_id: 2,
        n_communities: 2,
    };
    let dist = community_stance_distribution(&assignment, &data.corpus);
    // the rows set the first window; drift mixes later windows
    for (c, row) in cfg.community_stance.iter().enumerate() {
        let members: Vec<&String> = data
            .corpus
            .users
            .iter()
            .filter(|u| data.planted.communities[*u] == c)
            .collect();
        assert!(members.len() >= 500);
        for l in StanceLabel::ALL {
            let share =
                members.iter().filter(|u| data.planted.stances[**u][0] == l).count() as f64 / members.len() as f64;
            assert!((share - row[l.index()]).abs() < 0.05, "community {c} {l}: {share}");
        }
        assert!(dist[&c].users >= 500);
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        SynthConfig { n_users: 3, ..small() },
        SynthConfig {
            p_in: 0.01,
            p_out: 0.02,
            ..small()
        },
        SynthConfig {
            community_stance: vec![[0.5, 0.5, 0.5]],
            ..small()
        },
        SynthConfig {
            drift: vec![],
            ..small()
        },
        SynthConfig {
            stance_word_rate: 0.9,
            entity_rate: 0.2,
            ..small()
        },
        SynthConfig {
            judgments: 5,
            ..small()
        },
    ];
    for cfg in bad {
        assert!(matches!(generate(&cfg), Err(Error::Synth(_))), "{cfg:?}");
    }
}

#[test]
fn two_judgment_corpora_assemble() {
    let data = generate(&SynthConfig {
        judgments: 2,
        annotator_accuracy: 0.6,
        ..small()
    })
    .unwrap();
    assert_eq!(data.corpus.disagreement_count(), 0);
}
