use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn stance() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stance"));
    for (k, _) in std::env::vars_os() {
        if k.to_string_lossy().starts_with("STANCE_") {
            cmd.env_remove(k);
        }
    }
    cmd
}

fn ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// A small synthetic dataset in `dir/data`.
fn dataset(dir: &Path) -> PathBuf {
    let data = dir.join("data");
    ok(stance()
        .args(["synth", "generate", "--seed", "2", "--users", "50", "--out"])
        .arg(&data));
    data
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn subcommands_write_their_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path());
    for f in [
        "tweets.jsonl",
        "triplets.jsonl",
        "edges.tsv",
        "parties.json",
        "politicians.json",
        "config.json",
    ] {
        assert!(data.join(f).is_file(), "{f}");
    }

    let stats = dir.path().join("stats.json");
    let out = ok(stance()
        .args(["corpus", "stats", "--corpus"])
        .arg(&data)
        .arg("--out")
        .arg(&stats));
    assert!(!out.stdout.is_empty());
    assert!(read_json(&stats).is_object());

    let graph = dir.path().join("graph");
    ok(stance()
        .args(["graph", "communities", "--seed", "1", "--edges"])
        .arg(data.join("edges.tsv"))
        .arg("--corpus")
        .arg(&data)
        .arg("--out")
        .arg(&graph));
    let partition = read_json(&graph.join("partition.json"));
    assert_eq!(partition["seed"], 1);
    assert!(partition["communities"].as_object().is_some_and(|c| !c.is_empty()));
    assert!(graph.join("community_stance.json").is_file());

    let gazetteer = dir.path().join("gazetteer.json");
    ok(stance()
        .args(["kb", "build", "--parties"])
        .arg(data.join("parties.json"))
        .arg("--politicians")
        .arg(data.join("politicians.json"))
        .arg("--out")
        .arg(&gazetteer));
    assert!(gazetteer.is_file());

    // a precomputed partition and compiled gazetteer replace the raw inputs
    let run = dir.path().join("run");
    ok(stance()
        .args(["run", "triplet", "--algo", "nb,dt", "--corpus"])
        .arg(&data)
        .arg("--partition")
        .arg(graph.join("partition.json"))
        .arg("--gazetteer")
        .arg(&gazetteer)
        .arg("--out")
        .arg(&run));
    let report = read_json(&run.join("report.json"));
    assert_eq!(report["reports"].as_array().unwrap().len(), 2);
    assert!(run.join("report.md").is_file());

    let temporal = dir.path().join("temporal");
    ok(stance()
        .args(["run", "temporal", "--k", "3", "--setup", "svm:bow+comm-cxt", "--corpus"])
        .arg(&data)
        .arg("--out")
        .arg(&temporal));
    let t = read_json(&temporal.join("temporal.json"));
    assert!(t.to_string().contains("comm-cxt"));
    assert!(temporal.join("temporal.md").is_file());
}

#[test]
fn synth_is_reproducible_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        ok(stance()
            .args(["synth", "generate", "--users", "30", "--seed", seed, "--out"])
            .arg(&out));
        let mut files: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files
            .iter()
            .filter(|p| p.is_file())
            .map(|p| (p.file_name().unwrap().to_owned(), std::fs::read(p).unwrap()))
            .collect::<Vec<_>>()
    };
    let a = read("a", "7");
    assert_eq!(a, read("b", "7"));
    assert_ne!(a, read("c", "8"));
}

#[test]
fn reports_carry_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path());
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"k": 3, "seed": 9, "algorithms": ["nb"], "features": "bow+comm-cxt"}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(stance()
        .args(["run", "triplet", "--seed", "5", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .env("STANCE_CORPUS", &data));
    let report = read_json(&out.join("report.json"));
    let cfg = &report["config"];
    assert_eq!(cfg["k"], 3);
    assert_eq!(cfg["seed"], 5, "flags win over the config file");
    assert_eq!(cfg["louvain_seed"], 0);
    assert_eq!(cfg["features"], "bow+comm-cxt");
    assert_eq!(cfg["corpus"], data.to_str().unwrap(), "env var fills the corpus");
    assert_eq!(cfg["edges"], data.join("edges.tsv").to_str().unwrap());
    assert_eq!(report["reports"][0]["seed"], 5);
    assert_eq!(report["reports"][0]["k"], 3);
    assert!(report["resources"]["modularity"].is_string());
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path());
    let out = dir.path().join("out");
    let run = |jobs: &str| {
        ok(stance()
            .args(["--jobs", jobs, "run", "sweep", "--algo", "nb", "--corpus"])
            .arg(&data)
            .arg("--out")
            .arg(&out));
        std::fs::read(out.join("sweep.csv")).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn failures_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    let missing = stance()
        .args(["run", "triplet", "--corpus", "/nonexistent/corpus", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
    let msg = stderr(&missing);
    assert_eq!(msg.lines().count(), 1, "{msg}");
    assert!(msg.starts_with("error: io: "), "{msg}");
    assert!(!out.exists(), "no output on failure");

    let no_corpus = stance()
        .args(["run", "triplet"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(no_corpus.status.code(), Some(1));
    assert!(stderr(&no_corpus).starts_with("error: "));

    let unknown = stance().args(["run", "triplet", "--bogus"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let msg = stderr(&unknown);
    assert_eq!(msg.lines().count(), 1, "{msg}");
    assert!(msg.starts_with("error: usage: "), "{msg}");

    let bad_groups = stance()
        .args(["run", "sweep", "--features", "bow+nonsense"])
        .output()
        .unwrap();
    assert_eq!(bad_groups.status.code(), Some(2));

    let bad_algo = stance().args(["run", "sweep", "--algo", "knn"]).output().unwrap();
    assert_eq!(bad_algo.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_json_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path());
    let out = dir.path().join("out");
    ok(stance()
        .args([
            "run",
            "sweep",
            "--algo",
            "mc,nb",
            "--features",
            "bow,sentiment,comm-cxt",
            "--corpus",
        ])
        .arg(&data)
        .arg("--out")
        .arg(&out));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("algorithm,groups,f_leave,f_remain,f_none,f_avg,seed,strategy")
    );
    assert_eq!(lines.count(), 2 * 7, "7 subsets of three groups per algorithm");
    assert!(read_json(&out.join("sweep.json"))["config"].is_object());
    assert!(out.join("sweep.md").is_file());
}
