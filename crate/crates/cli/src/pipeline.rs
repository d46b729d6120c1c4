//! Loading corpus, graph, gazetteer and lexica into a feature context.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use log::info;
use stance_core::corpus::{load_corpus, Corpus};
use stance_core::eval::{triplet_level_dataset, tweet_level_dataset, ExperimentSettings, Prepared};
use stance_core::features::{FeatureContext, LexiconSet};
use stance_core::graph::{communities_for_users, read_edges_tsv, read_partition, FilterMode, LouvainConfig};
use stance_core::knowledge::{build_gazetteer, load_records, Gazetteer, PartyRecord, PoliticianRecord};
use stance_core::learn::Hyperparams;

use crate::config::{Level, RunConfig};

pub struct Loaded {
    pub corpus: Corpus,
    pub prepared: Prepared<f64>,
    pub resources: BTreeMap<&'static str, String>,
}

pub fn load_gazetteer(cfg: &RunConfig) -> Result<Option<Gazetteer>> {
    if let Some(path) = &cfg.gazetteer {
        return Ok(Some(Gazetteer::load(path)?));
    }
    match (&cfg.parties, &cfg.politicians) {
        (Some(p), Some(q)) => {
            let parties: Vec<PartyRecord> = load_records(p)?;
            let politicians: Vec<PoliticianRecord> = load_records(q)?;
            Ok(Some(build_gazetteer(&parties, &politicians)?))
        }
        (None, None) => Ok(None),
        _ => bail!("both --parties and --politicians are needed to build a gazetteer"),
    }
}

pub fn filter_mode(cfg: &RunConfig) -> FilterMode {
    if cfg.single_pass {
        FilterMode::SinglePass
    } else {
        FilterMode::Iterative
    }
}

pub fn load(cfg: &RunConfig) -> Result<Loaded> {
    let Some(corpus_path) = &cfg.corpus else {
        bail!("no corpus given (--corpus or STANCE_CORPUS)");
    };
    let corpus = load_corpus(corpus_path)?;
    let mut resources = BTreeMap::new();
    let mut ctx = FeatureContext::<f64>::new(corpus.windows.len());

    ctx.lexica = Some(match &cfg.lexica {
        Some(dir) => LexiconSet::load_dir(dir)?,
        None => LexiconSet::builtin(),
    });
    resources.insert(
        "lexica",
        cfg.lexica
            .as_ref()
            .map_or("bundled".into(), |p| p.display().to_string()),
    );

    ctx.gazetteer = load_gazetteer(cfg)?;
    if let Some(g) = &ctx.gazetteer {
        resources.insert("gazetteer_aliases", g.len().to_string());
    }

    if let Some(path) = &cfg.partition {
        let file = read_partition(path)?;
        ctx.communities = Some(file.assignment_for(&corpus.users));
    } else if let Some(path) = &cfg.edges {
        let graph = read_edges_tsv(path)?;
        let run = communities_for_users::<f64>(
            &graph,
            &corpus.users,
            cfg.min_degree,
            filter_mode(cfg),
            &LouvainConfig::with_seed(cfg.louvain_seed),
        )?;
        info!(
            "louvain: {} communities, Q = {:.4}",
            run.partition.num_communities(),
            run.partition.modularity
        );
        resources.insert("modularity", format!("{:.6}", run.partition.modularity));
        ctx.communities = Some(run.assignment);
    }
    if let Some(a) = &ctx.communities {
        resources.insert("communities", a.n_communities.to_string());
    }

    let instances = match cfg.level {
        Level::Triplet => triplet_level_dataset(&corpus),
        Level::Tweet => tweet_level_dataset(&corpus),
    };
    info!("{} instances", instances.len());
    let prepared = Prepared::new(instances, ctx)?;
    Ok(Loaded {
        corpus,
        prepared,
        resources,
    })
}

pub fn settings(cfg: &RunConfig) -> ExperimentSettings {
    ExperimentSettings {
        k: cfg.k,
        strategy: cfg.strategy,
        seed: cfg.seed,
        hyperparams: Hyperparams {
            standardize: cfg.standardize,
            ..Hyperparams::default()
        },
        bow_weighting: cfg.bow_weighting,
    }
}
