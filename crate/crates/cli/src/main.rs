//! `stance`: command-line driver for the stance-detection experiments.

mod config;
mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use stance_core::corpus::{agreement_by_window, label_distribution, load_corpus, stance_transitions};
use stance_core::eval::{
    ablation, ablation_markdown, cross_validate, percent, report_markdown, sweep_combinations, sweep_csv,
    sweep_markdown, temporal_experiment, temporal_markdown, write_json, write_text, FeatureSetup, FoldStrategy,
};
use stance_core::features::BowWeighting;
use stance_core::graph::{
    communities_for_users, community_stance_distribution, read_edges_tsv, write_partition, LouvainConfig, PartitionFile,
};
use stance_core::learn::Algorithm;
use stance_core::synth::{generate, write_dataset, SynthConfig};

use config::{Level, RunConfig};

#[derive(Parser)]
#[command(
    name = "stance",
    version,
    about = "Stance detection experiments with context features"
)]
struct Cli {
    /// Worker threads for cross-validation jobs (default: all cores).
    #[arg(long, global = true, env = "STANCE_JOBS")]
    jobs: Option<usize>,
    /// Log progress to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus statistics.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Follower-graph community detection.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Party/politician gazetteer.
    #[command(subcommand)]
    Kb(KbCmd),
    /// Cross-validated experiments.
    #[command(subcommand)]
    Run(Box<RunCmd>),
    /// Synthetic datasets.
    #[command(subcommand)]
    Synth(SynthCmd),
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Label distribution, stance trajectories and agreement per window.
    Stats {
        #[arg(long, env = "STANCE_CORPUS")]
        corpus: PathBuf,
        /// Also write the statistics as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Louvain communities of the degree-filtered follower graph.
    Communities {
        #[arg(long, env = "STANCE_EDGES")]
        edges: PathBuf,
        #[arg(long, env = "STANCE_CORPUS")]
        corpus: PathBuf,
        #[arg(long, default_value_t = 10)]
        min_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Prune low-degree nodes once instead of until stable.
        #[arg(long)]
        single_pass: bool,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum KbCmd {
    /// Compile party and politician snapshots into a gazetteer.
    Build {
        #[arg(long, env = "STANCE_PARTIES")]
        parties: PathBuf,
        #[arg(long, env = "STANCE_POLITICIANS")]
        politicians: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum RunCmd {
    /// Cross-validation at triplet level.
    Triplet(RunArgs),
    /// Cross-validation on single tweets inheriting their triplet's label.
    Tweet(RunArgs),
    /// Every non-empty subset of the selected groups, per algorithm.
    Sweep(RunArgs),
    /// Drop the context groups together, then each group alone.
    Ablation(RunArgs),
    /// Cross-validation inside each time window, without the diachronic group.
    Temporal {
        #[command(flatten)]
        args: RunArgs,
        /// `ALGO:FEATURES` pairs, e.g. `svm:bow+sentiment+comm-cxt`; defaults to every
        /// selected algorithm with `--features`.
        #[arg(long = "setup", value_name = "ALGO:FEATURES")]
        setups: Vec<String>,
    },
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// JSON run configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "STANCE_CORPUS")]
    corpus: Option<PathBuf>,
    #[arg(long, env = "STANCE_EDGES")]
    edges: Option<PathBuf>,
    /// Precomputed partition.json; replaces --edges.
    #[arg(long, env = "STANCE_PARTITION")]
    partition: Option<PathBuf>,
    #[arg(long, env = "STANCE_PARTIES")]
    parties: Option<PathBuf>,
    #[arg(long, env = "STANCE_POLITICIANS")]
    politicians: Option<PathBuf>,
    /// Compiled gazetteer from `kb build`; replaces --parties/--politicians.
    #[arg(long, env = "STANCE_GAZETTEER")]
    gazetteer: Option<PathBuf>,
    #[arg(long, env = "STANCE_LEXICA")]
    lexica: Option<PathBuf>,
    /// Instance level for sweep, ablation and temporal runs.
    #[arg(long, value_enum)]
    level: Option<Level>,
    /// Comma-separated: mc, nb, svm, dt, rf.
    #[arg(long = "algo", value_delimiter = ',')]
    algorithms: Vec<Algorithm>,
    /// Feature groups joined by `+` or `,` (`all` for every group), or `unigrams`/`ngrams`.
    #[arg(long = "features", alias = "groups")]
    features: Option<FeatureSetup>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    louvain_seed: Option<u64>,
    #[arg(long)]
    min_degree: Option<usize>,
    #[arg(long)]
    single_pass: bool,
    /// stratified or user-grouped.
    #[arg(long)]
    strategy: Option<FoldStrategy>,
    /// Standardise the continuous columns before training.
    #[arg(long)]
    standardize: bool,
    #[arg(long, value_parser = parse_weighting)]
    bow_weighting: Option<BowWeighting>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_weighting(s: &str) -> Result<BowWeighting, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown weighting `{s}`"))
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    c.$f = v.clone().into();
                }
            )*};
        }
        take!(corpus, edges, partition, parties, politicians, gazetteer, lexica);
        take!(
            level,
            features,
            k,
            seed,
            louvain_seed,
            min_degree,
            strategy,
            bow_weighting,
            out
        );
        if !self.algorithms.is_empty() {
            c.algorithms = self.algorithms.clone();
        }
        c.single_pass |= self.single_pass;
        c.standardize |= self.standardize;
        c.discover_resources();
        Ok(c)
    }
}

#[derive(Subcommand)]
enum SynthCmd {
    /// Write a synthetic corpus, follower graph, gazetteer snapshots and lexica.
    Generate {
        /// JSON generator configuration; unset fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        users: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    config: &'a RunConfig,
    resources: &'a std::collections::BTreeMap<&'static str, String>,
    #[serde(flatten)]
    body: T,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn corpus_stats(corpus: &Path, out: Option<&Path>) -> Result<()> {
    let c = load_corpus(corpus)?;
    let total = label_distribution(&c, None);
    let per_window: Vec<_> = (0..c.windows.len()).map(|w| label_distribution(&c, Some(w))).collect();
    let transitions = stance_transitions(&c)?;
    let agreement = agreement_by_window(&c).ok();

    println!("| window | leave | remain | none | total |\n|---|---:|---:|---:|---:|");
    for (w, d) in c.windows.iter().zip(&per_window) {
        println!(
            "| {} | {} | {} | {} | {} |",
            w.name,
            d.leave,
            d.remain,
            d.none,
            d.total()
        );
    }
    println!(
        "| all | {} | {} | {} | {} |",
        total.leave,
        total.remain,
        total.none,
        total.total()
    );
    println!("\ndisagreements excluded: {}", c.disagreement_count());
    println!("stable users: {}%", percent(transitions.stable_fraction()));
    if let Some(a) = &agreement {
        let names: Vec<String> = c
            .windows
            .iter()
            .zip(a)
            .map(|(w, v)| format!("{} {v:.2}", w.name))
            .collect();
        println!("agreement: {}", names.join(", "));
    }
    if let Some(out) = out {
        let json = serde_json::json!({
            "triplets": c.triplets.len(),
            "disagreements": c.disagreement_count(),
            "distribution": total,
            "per_window": c.windows.iter().zip(&per_window).map(|(w, d)| (w.name.clone(), *d)).collect::<std::collections::BTreeMap<_, _>>(),
            "transitions": transitions,
            "agreement": agreement,
        });
        write_json(out, &json)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn graph_communities(
    edges: &Path,
    corpus: &Path,
    min_degree: usize,
    seed: u64,
    single_pass: bool,
    resolution: f64,
    out: &Path,
) -> Result<()> {
    let c = load_corpus(corpus)?;
    let graph = read_edges_tsv(edges)?;
    let mode = if single_pass {
        stance_core::graph::FilterMode::SinglePass
    } else {
        stance_core::graph::FilterMode::Iterative
    };
    let config = LouvainConfig {
        resolution,
        ..LouvainConfig::with_seed(seed)
    };
    let run = communities_for_users::<f64>(&graph, &c.users, min_degree, mode, &config)?;
    create_dir(out)?;
    write_partition(
        out.join("partition.json"),
        &PartitionFile::new(&run.partition, &run.assignment),
    )?;
    let dist = community_stance_distribution(&run.assignment, &c);
    write_json(out.join("community_stance.json"), &dist)?;
    println!(
        "graph: {} nodes, {} edges after filtering (min degree {min_degree}); Q = {:.4}",
        run.filtered.node_count(),
        run.filtered.edge_count(),
        run.partition.modularity
    );
    println!("\n| community | users | leave % | remain % | none % |\n|---:|---:|---:|---:|---:|");
    for (id, s) in &dist {
        let f = s.fractions.unwrap_or([0.0; 3]);
        println!(
            "| {id} | {} | {} | {} | {} |",
            s.users,
            percent(f[0]),
            percent(f[1]),
            percent(f[2])
        );
    }
    Ok(())
}

fn kb_build(parties: &Path, politicians: &Path, out: &Path) -> Result<()> {
    let cfg = RunConfig {
        parties: Some(parties.into()),
        politicians: Some(politicians.into()),
        ..RunConfig::default()
    };
    let g = pipeline::load_gazetteer(&cfg)?.expect("both snapshots given");
    g.save(out)?;
    let s = g.stats();
    println!("parties {} ({} aliases)", s.parties, s.party_aliases);
    println!("politicians {} ({} aliases)", s.politicians, s.politician_aliases);
    println!("multi-stance politicians {}", s.multi_stance_politicians);
    if !s.unknown_affiliations.is_empty() {
        println!("unknown affiliations {}", s.unknown_affiliations.len());
    }
    Ok(())
}

fn run(cmd: RunCmd) -> Result<()> {
    let (args, level_override, setups) = match &cmd {
        RunCmd::Triplet(a) => (a, Some(Level::Triplet), Vec::new()),
        RunCmd::Tweet(a) => (a, Some(Level::Tweet), Vec::new()),
        RunCmd::Sweep(a) | RunCmd::Ablation(a) => (a, None, Vec::new()),
        RunCmd::Temporal { args, setups } => (args, None, setups.clone()),
    };
    let mut cfg = args.resolve()?;
    if let Some(l) = level_override {
        cfg.level = l;
    }
    let loaded = pipeline::load(&cfg)?;
    let settings = pipeline::settings(&cfg);
    let out = cfg.out.clone();
    create_dir(&out)?;
    let wrap = |body| Output {
        config: &cfg,
        resources: &loaded.resources,
        body,
    };
    match cmd {
        RunCmd::Triplet(_) | RunCmd::Tweet(_) => {
            let mut reports = Vec::new();
            let mut md = String::new();
            for &algo in &cfg.algorithms {
                let r = cross_validate(&loaded.prepared, algo, cfg.features, &settings)?;
                md.push_str(&report_markdown(&r));
                md.push('\n');
                reports.push(r);
            }
            write_json(
                out.join("report.json"),
                &wrap(serde_json::json!({ "reports": reports })),
            )?;
            write_text(out.join("report.md"), &md)?;
            print!("{md}");
        }
        RunCmd::Sweep(_) => {
            let FeatureSetup::Groups(groups) = cfg.features else {
                anyhow::bail!("a sweep needs feature groups, not {}", cfg.features);
            };
            let result = sweep_combinations(&loaded.prepared, &cfg.algorithms, groups, &settings)?;
            write_text(out.join("sweep.csv"), &sweep_csv(&result.rows)?)?;
            write_json(out.join("sweep.json"), &wrap(serde_json::to_value(&result)?))?;
            write_text(out.join("sweep.md"), &sweep_markdown(&result.rows))?;
            for (a, r) in &result.best {
                println!("best {a}: {} (F_avg {})", r.groups, percent(r.f_avg));
            }
        }
        RunCmd::Ablation(_) => {
            let FeatureSetup::Groups(groups) = cfg.features else {
                anyhow::bail!("ablation needs feature groups, not {}", cfg.features);
            };
            let mut tables = Vec::new();
            let mut md = String::new();
            for &algo in &cfg.algorithms {
                let t = ablation(&loaded.prepared, algo, groups, &settings)?;
                md.push_str(&format!("{algo}\n\n{}\n", ablation_markdown(&t)));
                tables.push(t);
            }
            write_json(
                out.join("ablation.json"),
                &wrap(serde_json::json!({ "tables": tables })),
            )?;
            write_text(out.join("ablation.md"), &md)?;
            print!("{md}");
        }
        RunCmd::Temporal { .. } => {
            let configs: Vec<(Algorithm, FeatureSetup)> = if setups.is_empty() {
                cfg.algorithms.iter().map(|&a| (a, cfg.features)).collect()
            } else {
                setups
                    .iter()
                    .map(|s| {
                        let (a, f) = s
                            .split_once(':')
                            .with_context(|| format!("setup `{s}` is not ALGO:FEATURES"))?;
                        Ok((a.parse()?, f.parse()?))
                    })
                    .collect::<Result<_>>()?
            };
            let names: Vec<String> = loaded.corpus.windows.iter().map(|w| w.name.clone()).collect();
            let rows = temporal_experiment(&loaded.prepared, &configs, &names, &settings)?;
            let md = temporal_markdown(&rows);
            write_json(out.join("temporal.json"), &wrap(serde_json::json!({ "rows": rows })))?;
            write_text(out.join("temporal.md"), &md)?;
            print!("{md}");
        }
    }
    Ok(())
}

fn synth_generate(config: Option<&Path>, seed: Option<u64>, users: Option<usize>, out: &Path) -> Result<()> {
    let mut cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str::<SynthConfig>(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SynthConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = users {
        cfg.n_users = n;
    }
    let data = generate(&cfg)?;
    create_dir(out)?;
    write_dataset(out, &data)?;
    println!(
        "{} users, {} triplets, {} edges written to {}",
        data.corpus.users.len(),
        data.corpus.triplets.len(),
        data.edges.len(),
        out.display()
    );
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    match cli.command {
        Command::Corpus(CorpusCmd::Stats { corpus, out }) => corpus_stats(&corpus, out.as_deref()),
        Command::Graph(GraphCmd::Communities {
            edges,
            corpus,
            min_degree,
            seed,
            single_pass,
            resolution,
            out,
        }) => graph_communities(&edges, &corpus, min_degree, seed, single_pass, resolution, &out),
        Command::Kb(KbCmd::Build {
            parties,
            politicians,
            out,
        }) => kb_build(&parties, &politicians, &out),
        Command::Run(cmd) => run(*cmd),
        Command::Synth(SynthCmd::Generate {
            config,
            seed,
            users,
            out,
        }) => synth_generate(config.as_deref(), seed, users, &out),
    }
}

/// `error: <kind>: <message>` on a single line.
fn error_line(e: &anyhow::Error) -> String {
    let kind = e
        .chain()
        .find_map(|c| c.downcast_ref::<stance_core::Error>())
        .map_or("io", |c| c.kind());
    let mut msg: Vec<String> = Vec::new();
    for c in e.chain() {
        let m = c.to_string();
        if !msg.last().is_some_and(|prev| prev.contains(&m)) {
            msg.push(m);
        }
    }
    format!("error: {kind}: {}", msg.join(": ").replace('\n', " "))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e
                .to_string()
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("error: usage: {first}");
            return ExitCode::from(2);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::FAILURE
        }
    }
}
